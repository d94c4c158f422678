//! Solver entry points on sample decks, shared by the round-trip suites and
//! `unirigid solve`.

use serde::{Deserialize, Serialize};

use crate::bracket::BracketForm;
use crate::error::{Error, Result};
use crate::fq::{FieldParams, FqField};
use crate::groups::{Heis, HeisElem, Hp, HpElem, StandardAutG2, StandardAutHeis, G2, G2Elem};
use crate::poly::{Pol, RatF};
use crate::rigidity::{heis_recover, hp_recover, solve_affine, split_central, AffineRecovery, HeisRecovery,
    HpRecovery, LinearMapSample};

/// Generators γᵢ of a G₂ lattice with images λ(γᵢ). A relation (i, j, k)
/// records γ_k = γᵢγⱼ; relation targets are left out of the linear sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2Deck {
    pub field: FieldParams,
    pub e: u64,
    pub generators: Vec<G2Elem>,
    pub images: Vec<G2Elem>,
    #[serde(default)]
    pub relations: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2Solution {
    pub recovery: AffineRecovery,
    pub zeta: Vec<RatF>,
}

fn as_pol(x: &RatF, what: &str) -> Result<Pol> {
    x.as_pol().cloned().ok_or_else(|| Error::Domain(format!("{what} must lie in F⁻")))
}

/// solve_affine on the y-coordinates, then split_central on the full deck.
pub fn solve_g2(deck: &G2Deck) -> Result<G2Solution> {
    let f = FqField::from_params(&deck.field)?;
    let form = BracketForm::new(deck.e, &f)?;
    if deck.generators.len() != deck.images.len() {
        return Err(Error::Parameter("generator and image lists differ in length".into()));
    }
    let targets: Vec<usize> = deck.relations.iter().map(|r| r.2).collect();
    let mut dom = Vec::new();
    let mut img = Vec::new();
    for (i, (g, h)) in deck.generators.iter().zip(&deck.images).enumerate() {
        if !targets.contains(&i) {
            dom.push(as_pol(&g.y, "generator y")?);
            img.push(as_pol(&h.y, "image y")?);
        }
    }
    let ls = LinearMapSample::new(dom, img, &f)?;
    let recovery = solve_affine(&ls, &form)?;
    if !recovery.is_consistent() {
        return Err(Error::Inconsistent(format!("λ* is not affine on samples {:?}", recovery.residual)));
    }
    let g2 = G2::from_form(form);
    let phi = StandardAutG2::with_default_certificate(recovery.tau, recovery.a.clone(), &f)?;
    let zeta = split_central(&g2, &deck.generators, &deck.images, &phi, &deck.relations)?;
    Ok(G2Solution { recovery, zeta: zeta.into_iter().map(|z| z.z).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisDeck {
    pub field: FieldParams,
    pub m: usize,
    pub samples: Vec<(HeisElem, HeisElem)>,
}

impl HeisDeck {
    pub fn solve(&self) -> Result<HeisRecovery> {
        let f = FqField::from_params(&self.field)?;
        heis_recover(&Heis::new(self.m, &f)?, &self.samples)
    }
}

/// Samples of λ_p on H_p, in any mix of H′_p and A components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpDeck {
    pub field: FieldParams,
    pub m: usize,
    pub samples: Vec<(HpElem, HpElem)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpSolution {
    pub recovery: HpRecovery,
    /// Samples whose image the recomposed map reproduces.
    pub reproduced: usize,
    pub total: usize,
}

/// Splits every sample and its image along H′_p × A, solves the H′_p part
/// through the Frobenius and recomposes each sampled image.
pub fn solve_hp(deck: &HpDeck) -> Result<HpSolution> {
    let f = FqField::from_params(&deck.field)?;
    let heis = Heis::new(deck.m, &f)?;
    let hp = Hp::new(deck.m, &f)?;
    let mut pieces = Vec::new();
    // (index of the H′_p piece, index of the A piece) per sample.
    let mut index = Vec::with_capacity(deck.samples.len());
    for (i, (g, img)) in deck.samples.iter().enumerate() {
        let (h, a) = hp.decompose(g)?;
        let (h2, a2) = hp.decompose(img)?;
        if a.z.is_zero() != a2.z.is_zero() {
            return Err(Error::Inconsistent(format!("decomposition: sample {i} mixes the H'_p and A factors")));
        }
        pieces.push((h, h2));
        let hi = pieces.len() - 1;
        let ai = if a.z.is_zero() {
            None
        } else {
            pieces.push((a, a2));
            Some(pieces.len() - 1)
        };
        index.push((hi, ai));
    }
    let recovery = hp_recover(&hp, &heis, &pieces)?;
    let phi = StandardAutHeis {
        t: recovery.heis.t.clone(),
        c_t: recovery.heis.c_t.clone(),
        tau: recovery.heis.tau,
        certificate_b: Pol::one(),
    };
    let mut reproduced = 0;
    for (i, (g, img)) in deck.samples.iter().enumerate() {
        let (hi, ai) = index[i];
        let k = recovery.h_prime.iter().position(|&x| x == hi).expect("H'_p pieces are solved");
        let (h, _) = hp.decompose(g)?;
        let base = hp.frobenius_untransport(&heis, &h)?;
        let lifted = heis.mul(&phi.apply(&heis, &base)?, &HeisElem::central(recovery.heis.zeta[k].clone(), deck.m))?;
        let mut out = hp.frobenius_transport(&heis, &lifted)?;
        if let Some(ai) = ai {
            let z = &pieces[ai].0.z;
            let psi = recovery
                .a_part
                .iter()
                .find(|(x, _)| x == z)
                .map(|(_, y)| y.clone())
                .ok_or_else(|| Error::Inconsistent(format!("no A correspondence for sample {i}")))?;
            out = hp.mul(&out, &HpElem::central(psi, deck.m))?;
        }
        if out == *img {
            reproduced += 1;
        }
    }
    Ok(HpSolution { recovery, reproduced, total: deck.samples.len() })
}
