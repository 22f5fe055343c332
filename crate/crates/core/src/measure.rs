//! Measure spaces reduced to their total mass, and simple functions stored as
//! `(value, mass)` atoms so that every integral is a finite sum.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative slack allowed when atom masses are summed against the total mass.
const MASS_SUM_RTOL: f64 = 1e-12;

/// A positive measure space, recorded by its total mass (possibly infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    total_mass: f64,
    label: String,
}

impl MeasureSpace {
    pub fn new(total_mass: f64, label: &str) -> Result<Self> {
        if total_mass.is_nan() || total_mass <= 0.0 {
            return Err(Error::domain(format!("total mass must be > 0, got {total_mass}")));
        }
        Ok(MeasureSpace {
            total_mass,
            label: label.to_string(),
        })
    }

    pub fn finite(total_mass: f64) -> Result<Self> {
        if !total_mass.is_finite() {
            return Err(Error::domain(format!("expected a finite total mass, got {total_mass}")));
        }
        Self::new(total_mass, "")
    }

    pub fn infinite() -> Self {
        MeasureSpace {
            total_mass: f64::INFINITY,
            label: String::new(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_finite(&self) -> bool {
        self.total_mass.is_finite()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Display for MeasureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.total_mass)
        } else {
            write!(f, "inf")
        }
    }
}

/// Parses `inf` or a positive real.
impl std::str::FromStr for MeasureSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" => Ok(MeasureSpace::infinite()),
            _ => {
                let m: f64 = s
                    .parse()
                    .map_err(|_| Error::parse(format!("total mass must be a positive real or `inf`, got `{s}`")))?;
                if !m.is_finite() {
                    return Err(Error::parse(format!("total mass must be a positive real or `inf`, got `{s}`")));
                }
                MeasureSpace::new(m, "")
            }
        }
    }
}

/// One level set: `value` taken on a set of measure `mass`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(value: f64, mass: f64) -> Self {
        Atom { value, mass }
    }
}

/// `f = Σ aᵢ χ_{Sᵢ}` on a measure space, held in canonical form: values
/// distinct and sorted in decreasing order, zero values dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    atoms: Vec<Atom>,
    space: MeasureSpace,
}

/// Superlevel set `{|f| ≥ α}` and its measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSet {
    pub alpha: f64,
    pub mass: f64,
}

impl SimpleFunction {
    /// Checks the atoms against the space and canonicalises them.
    pub fn new(atoms: Vec<Atom>, space: MeasureSpace) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !(a.value.is_finite() && a.value >= 0.0) {
                return Err(Error::domain(format!("atom {i}: value must be finite and >= 0, got {}", a.value)));
            }
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::domain(format!("atom {i}: mass must be finite and > 0, got {}", a.mass)));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.mass).sum();
        if total > space.total_mass * (1.0 + MASS_SUM_RTOL) {
            return Err(Error::domain(format!(
                "atom masses sum to {total}, exceeding the total mass {}",
                space.total_mass
            )));
        }
        Ok(SimpleFunction {
            atoms: canonicalize(atoms),
            space,
        })
    }

    /// `c·χ_S` with `μ(S) = mass`, on a space of infinite measure.
    pub fn indicator(mass: f64) -> Result<Self> {
        Self::new(vec![Atom::new(1.0, mass)], MeasureSpace::infinite())
    }

    pub fn zero(space: MeasureSpace) -> Self {
        SimpleFunction {
            atoms: Vec::new(),
            space,
        }
    }

    /// Builds from `(value, mass)` pairs on an infinite-measure space.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs.iter().map(|&(v, m)| Atom::new(v, m)).collect(),
            MeasureSpace::infinite(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Measure of the support `{f ≠ 0}`.
    pub fn support_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn ess_sup(&self) -> f64 {
        self.atoms.first().map_or(0.0, |a| a.value)
    }

    /// `μ{|f| ≥ α}`. At `α = 0` this is the whole space.
    pub fn distribution(&self, alpha: f64) -> Result<DistributionSet> {
        if !(alpha >= 0.0) {
            return Err(Error::domain(format!("threshold must be >= 0, got {alpha}")));
        }
        let mass = if alpha == 0.0 {
            self.space.total_mass
        } else {
            self.atoms.iter().take_while(|a| a.value >= alpha).map(|a| a.mass).sum()
        };
        Ok(DistributionSet { alpha, mass })
    }

    /// `min(|f|, n)`.
    pub fn truncate(&self, n: f64) -> Result<Self> {
        if !(n > 0.0) {
            return Err(Error::domain(format!("truncation level must be > 0, got {n}")));
        }
        let atoms = self.atoms.iter().map(|a| Atom::new(a.value.min(n), a.mass)).collect();
        Ok(SimpleFunction {
            atoms: canonicalize(atoms),
            space: self.space.clone(),
        })
    }

    /// `c·f` for `c ≥ 0`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::domain(format!("scale factor must be finite and >= 0, got {c}")));
        }
        let atoms = self.atoms.iter().map(|a| Atom::new(a.value * c, a.mass)).collect();
        Ok(SimpleFunction {
            atoms: canonicalize(atoms),
            space: self.space.clone(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::parse(format!("invalid input JSON: {e}")))?;
        let space = MeasureSpace::new(doc.total_mass.0, "")?;
        Self::new(doc.atoms, space)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            total_mass: TotalMass(self.space.total_mass),
            atoms: self.atoms.clone(),
        };
        serde_json::to_string(&doc).expect("simple functions always serialise")
    }
}

/// Merges equal values, drops zero values, and sorts by decreasing value.
///
/// Zero-valued atoms contribute nothing to any modular, superlevel set at
/// `α > 0`, or supremum, so dropping them keeps every derived quantity intact.
pub fn canonicalize(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.retain(|a| a.value > 0.0);
    atoms.sort_by(|a, b| b.value.total_cmp(&a.value));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if last.value == a.value => last.mass += a.mass,
            _ => out.push(a),
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    total_mass: TotalMass,
    atoms: Vec<Atom>,
}

struct TotalMass(f64);

impl Serialize for TotalMass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for TotalMass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(m) => Ok(TotalMass(m)),
            Raw::Text(s) if s == "inf" => Ok(TotalMass(f64::INFINITY)),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "total_mass must be a number or \"inf\", got \"{s}\""
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(pairs: &[(f64, f64)]) -> SimpleFunction {
        SimpleFunction::from_pairs(pairs).unwrap()
    }

    #[test]
    fn ess_sup_examples() {
        assert_eq!(f(&[(3.0, 1.0), (1.0, 1.0)]).ess_sup(), 3.0);
        assert_eq!(f(&[]).ess_sup(), 0.0);
        let merged = f(&[(2.0, 0.5), (2.0, 0.5)]);
        assert_eq!(merged.atoms(), &[Atom::new(2.0, 1.0)]);
        assert_eq!(merged.ess_sup(), 2.0);
    }

    #[test]
    fn distribution_examples() {
        let g = f(&[(3.0, 1.0), (1.0, 2.0)]);
        assert_eq!(g.distribution(2.0).unwrap().mass, 1.0);
        assert_eq!(g.distribution(1.0).unwrap().mass, 3.0);
        assert_eq!(g.distribution(4.0).unwrap().mass, 0.0);
        assert_eq!(g.distribution(0.0).unwrap().mass, f64::INFINITY);
        let h = SimpleFunction::new(vec![Atom::new(3.0, 1.0)], MeasureSpace::finite(10.0).unwrap()).unwrap();
        assert_eq!(h.distribution(0.0).unwrap().mass, 10.0);
        assert!(g.distribution(-1.0).is_err());
    }

    #[test]
    fn truncate_examples() {
        let g = f(&[(5.0, 1.0), (2.0, 1.0)]);
        assert_eq!(g.truncate(3.0).unwrap().atoms(), &[Atom::new(3.0, 1.0), Atom::new(2.0, 1.0)]);
        assert_eq!(g.truncate(5.0).unwrap(), g);
        assert_eq!(g.truncate(9.0).unwrap(), g);
        let h = f(&[(5.0, 1.0), (4.0, 1.0)]);
        assert_eq!(h.truncate(3.0).unwrap().atoms(), &[Atom::new(3.0, 2.0)]);
        assert!(g.truncate(0.0).is_err());
    }

    #[test]
    fn rejects_bad_atoms() {
        assert!(SimpleFunction::from_pairs(&[(-1.0, 1.0)]).is_err());
        assert!(SimpleFunction::from_pairs(&[(1.0, 0.0)]).is_err());
        assert!(SimpleFunction::from_pairs(&[(1.0, f64::INFINITY)]).is_err());
        assert!(SimpleFunction::from_pairs(&[(f64::NAN, 1.0)]).is_err());
        let small = MeasureSpace::finite(1.0).unwrap();
        assert!(SimpleFunction::new(vec![Atom::new(1.0, 0.6), Atom::new(2.0, 0.6)], small.clone()).is_err());
        assert!(SimpleFunction::new(vec![Atom::new(1.0, 0.5), Atom::new(2.0, 0.5)], small).is_ok());
        assert!(MeasureSpace::new(0.0, "").is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"total_mass": "inf", "atoms": [{"value": 1, "mass": 2}, {"value": 3, "mass": 0.5}]}"#;
        let g = SimpleFunction::from_json(text).unwrap();
        assert_eq!(g.atoms(), &[Atom::new(3.0, 0.5), Atom::new(1.0, 2.0)]);
        assert!(!g.space().is_finite());
        assert_eq!(SimpleFunction::from_json(&g.to_json()).unwrap(), g);

        let finite = SimpleFunction::from_json(r#"{"total_mass": 10, "atoms": []}"#).unwrap();
        assert_eq!(finite.space().total_mass(), 10.0);
        assert!(finite.is_zero());
    }

    #[test]
    fn json_rejects_unknown_and_bad_fields() {
        for bad in [
            r#"{"total_mass": "inf", "atoms": [], "extra": 1}"#,
            r#"{"total_mass": "inf", "atoms": [{"value": 1, "mass": 1, "w": 2}]}"#,
            r#"{"total_mass": "big", "atoms": []}"#,
            r#"{"total_mass": -1, "atoms": []}"#,
            r#"{"atoms": []}"#,
            r#"{"total_mass": 2, "atoms": [{"value": 1, "mass": 3}]}"#,
            r#"{"total_mass": 2, "atoms": [{"value": -1, "mass": 1}]}"#,
            "not json",
        ] {
            assert!(SimpleFunction::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parses_total_mass_flag() {
        assert!(!"inf".parse::<MeasureSpace>().unwrap().is_finite());
        assert_eq!("3".parse::<MeasureSpace>().unwrap().total_mass(), 3.0);
        assert!("0".parse::<MeasureSpace>().is_err());
        assert!("abc".parse::<MeasureSpace>().is_err());
        assert!("NaN".parse::<MeasureSpace>().is_err());
    }
}
