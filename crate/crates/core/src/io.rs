//! Versioned JSON documents for rings, functionals and oriented polarizations.

use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroup, Element, GroupCharacter, Subgroup};
use crate::error::{Error, Result};
use crate::liering::{BracketEntry, LieRing};
use crate::polar::{OrientedPolarization, Polarization};

pub const FORMAT: u32 = 1;

fn check_format(format: u32) -> Result<()> {
    if format != FORMAT {
        return Err(Error::Input(format!("unsupported format {format}, expected {FORMAT}")));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionalDoc {
    #[serde(default = "default_format")]
    pub format: u32,
    pub coeffs: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingDoc {
    pub format: u32,
    pub p: u64,
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    /// Optional default functional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<FunctionalDoc>,
}

fn default_format() -> u32 {
    FORMAT
}

impl RingDoc {
    pub fn from_ring(ring: &LieRing, f: Option<&GroupCharacter>) -> Self {
        RingDoc {
            format: FORMAT,
            p: ring.p(),
            exponents: ring.carrier().exponents().to_vec(),
            brackets: ring.bracket_entries(),
            functional: f.map(|f| FunctionalDoc {
                format: FORMAT,
                coeffs: f.coeffs().to_vec(),
            }),
        }
    }

    pub fn build(&self) -> Result<(LieRing, Option<GroupCharacter>)> {
        check_format(self.format)?;
        let carrier = if self.exponents.is_empty() {
            AbelianGroup::trivial(self.p)
        } else {
            AbelianGroup::new(self.p, self.exponents.clone())?
        };
        let ring = LieRing::new(&carrier, &self.brackets)?;
        let f = match &self.functional {
            Some(doc) => Some(doc.build(&carrier)?),
            None => None,
        };
        Ok((ring, f))
    }
}

impl FunctionalDoc {
    pub fn build(&self, carrier: &AbelianGroup) -> Result<GroupCharacter> {
        check_format(self.format)?;
        if self.coeffs.iter().enumerate().any(|(i, &c)| i < carrier.rank() && c >= carrier.modulus(i)) {
            return Err(Error::Input("functional coefficient out of range".into()));
        }
        GroupCharacter::new(carrier, self.coeffs.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolarizationDoc {
    pub generators: Vec<Element>,
    #[serde(default = "unit")]
    pub orientation: u64,
}

fn unit() -> u64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolarizationsDoc {
    pub format: u32,
    pub polarizations: Vec<PolarizationDoc>,
}

impl PolarizationDoc {
    pub fn from_oriented(op: &OrientedPolarization) -> Self {
        PolarizationDoc {
            generators: op.presentation.basis().to_vec(),
            orientation: op.orientation.scalar,
        }
    }

    /// Certifies the subgroup and interprets the orientation against the
    /// listed generators when they form a basis, otherwise against the
    /// canonical basis.
    pub fn build(&self, ring: &LieRing, f: &GroupCharacter) -> Result<OrientedPolarization> {
        let a = ring.carrier();
        if self.generators.iter().any(|g| !a.is_element(g)) {
            return Err(Error::Input("generator is not an element of the carrier".into()));
        }
        if self.orientation % ring.p() == 0 {
            return Err(Error::Input("orientation must be a unit mod p".into()));
        }
        let s = Subgroup::from_generators(a, &self.generators);
        let pol = Polarization::new(ring, f, s)?;
        let canonical = OrientedPolarization::new(pol, 1);
        match canonical.represented_by(self.generators.clone()) {
            Ok(mut op) => {
                op.orientation.scalar = self.orientation % ring.p();
                Ok(op)
            }
            Err(_) => Ok(canonical.rescaled(self.orientation)),
        }
    }
}

pub fn parse_ring(text: &str) -> Result<(LieRing, Option<GroupCharacter>)> {
    let doc: RingDoc = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    doc.build()
}

pub fn parse_functional(text: &str, carrier: &AbelianGroup) -> Result<GroupCharacter> {
    let doc: FunctionalDoc = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    doc.build(carrier)
}

pub fn parse_polarizations(
    text: &str,
    ring: &LieRing,
    f: &GroupCharacter,
) -> Result<Vec<OrientedPolarization>> {
    let doc: PolarizationsDoc =
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    check_format(doc.format)?;
    doc.polarizations.iter().map(|p| p.build(ring, f)).collect()
}
