use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::planar_map::{BlockMode, Color};
use crate::series::{AuxPoly, GSeries, Var};

use super::ModelError;

/// What the series order counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// total number of faces; always contractive
    Faces,
    /// the exponent of one weight variable, usually `g`
    Var(Var),
}

impl Grading {
    pub fn g() -> Grading {
        Grading::Var(Var::new("g"))
    }

    /// Splits a face weight into a graded constant.
    pub fn weight_series(&self, w: &AuxPoly, order: usize) -> GSeries {
        match self {
            Grading::Faces => GSeries::monomial(1, w.clone(), order),
            Grading::Var(v) => GSeries::regrade(w, *v, order),
        }
    }

    /// Re-expresses a solved series as a series in `v`.
    pub fn to_var(&self, s: &GSeries, v: Var, order: usize) -> GSeries {
        match self {
            Grading::Var(u) if *u == v => s.truncate(order),
            Grading::Var(u) => GSeries::regrade(&s.rescale(&AuxPoly::var(u.name())).flatten(), v, order),
            Grading::Faces => GSeries::regrade(&s.flatten(), v, order),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Occupancy {
    Required,
    Forbidden,
}

/// Particles on faces subject to the `p`-exclusion rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Particles {
    pub p: u8,
    /// `z[i]` weights a face holding `i` particles; `z[0] = 1`
    pub z: Vec<AuxPoly>,
    pub constraints: BTreeMap<usize, Occupancy>,
}

impl Particles {
    pub fn hard(z1: AuxPoly) -> Particles {
        Particles { p: 1, z: vec![AuxPoly::one(), z1], constraints: BTreeMap::new() }
    }

    fn allows(&self, valence: usize, charge: usize) -> bool {
        match self.constraints.get(&valence) {
            Some(Occupancy::Required) => charge > 0,
            Some(Occupancy::Forbidden) => charge == 0,
            None => true,
        }
    }
}

/// Face weights, blocking weight and particle content of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub white: BTreeMap<usize, AuxPoly>,
    pub black: BTreeMap<usize, AuxPoly>,
    pub y: AuxPoly,
    pub mode: BlockMode,
    pub particles: Option<Particles>,
    pub grading: Grading,
}

impl ModelSpec {
    pub fn new(white: &[(usize, AuxPoly)], black: &[(usize, AuxPoly)], y: AuxPoly) -> ModelSpec {
        ModelSpec {
            white: white.iter().cloned().collect(),
            black: black.iter().cloned().collect(),
            y,
            mode: BlockMode::Directed,
            particles: None,
            grading: Grading::g(),
        }
    }

    pub fn with_mode(mut self, mode: BlockMode) -> ModelSpec {
        self.mode = mode;
        self
    }

    pub fn with_grading(mut self, grading: Grading) -> ModelSpec {
        self.grading = grading;
        self
    }

    pub fn with_particles(mut self, particles: Particles) -> ModelSpec {
        self.particles = Some(particles);
        self
    }

    /// Quadrangulations as Eulerian maps: white 4-gons weighted `g`, black 2-gons free.
    pub fn quadrangulation(y: AuxPoly) -> ModelSpec {
        ModelSpec::new(&[(4, AuxPoly::var("g"))], &[(2, AuxPoly::one())], y)
    }

    /// Eulerian triangulations with hard particles.
    pub fn hp_triangulation() -> ModelSpec {
        let g = AuxPoly::var("g");
        ModelSpec::new(&[(3, g.clone())], &[(3, g)], AuxPoly::int(-1)).with_particles(Particles::hard(AuxPoly::var("z1")))
    }

    /// Ising spins on quadrangulations: 4-gons empty, 2-gons occupied.
    pub fn ising() -> ModelSpec {
        let g = AuxPoly::var("g");
        let faces = [(2, AuxPoly::one()), (4, g)];
        let mut particles = Particles::hard(AuxPoly::var("z1"));
        particles.constraints.insert(2, Occupancy::Required);
        particles.constraints.insert(4, Occupancy::Forbidden);
        ModelSpec::new(&faces, &faces, AuxPoly::int(-1)).with_particles(particles).with_grading(Grading::Faces)
    }

    pub fn max_valence(&self) -> usize {
        self.white.keys().chain(self.black.keys()).copied().max().unwrap_or(0)
    }

    /// Largest particle count per face.
    pub fn max_charge(&self) -> usize {
        self.particles.as_ref().map_or(0, |p| p.p as usize)
    }

    /// Weight of a `k`-valent face of colour `c` carrying `charge` particles, if allowed.
    pub fn face_weight(&self, c: Color, k: usize, charge: usize) -> Option<AuxPoly> {
        let base = match c {
            Color::White => self.white.get(&k)?,
            Color::Black => self.black.get(&k)?,
        };
        match &self.particles {
            None => (charge == 0).then(|| base.clone()),
            Some(p) => {
                if charge > p.p as usize || !p.allows(k, charge) {
                    return None;
                }
                Some(base * &p.z[charge])
            }
        }
    }

    /// Whether an edge between faces with `i` and `j` particles may be blocked.
    pub fn may_block(&self, i: usize, j: usize) -> bool {
        match &self.particles {
            None => true,
            Some(p) => i + j > p.p as usize,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.white.is_empty() && self.black.is_empty() {
            return Ok(());
        }
        if self.white.contains_key(&0) || self.black.contains_key(&0) {
            return Err(ModelError::InvalidSpec("face valence must be positive".into()));
        }
        if let Some(p) = &self.particles {
            if p.z.len() != p.p as usize + 1 || p.z[0] != AuxPoly::one() {
                return Err(ModelError::InvalidSpec("occupancy weights must be z0 = 1, z1, ..., zp".into()));
            }
            if self.mode != BlockMode::Directed {
                return Err(ModelError::InvalidSpec("particle models block single edges".into()));
            }
        }
        if self.mode == BlockMode::Pairs && self.black.keys().any(|&k| k != 2) {
            return Err(ModelError::InvalidSpec("pair blocking needs bivalent black faces only".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> ModelSpecJson {
        let map = |m: &BTreeMap<usize, AuxPoly>| m.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let (p, occupancy, constraints) = match &self.particles {
            None => (0, BTreeMap::new(), Vec::new()),
            Some(pt) => (
                pt.p,
                pt.z.iter().enumerate().skip(1).map(|(i, z)| (format!("z{i}"), z.to_string())).collect(),
                pt.constraints.iter().map(|(&valence, &particles)| ConstraintJson { valence, particles }).collect(),
            ),
        };
        ModelSpecJson {
            white: map(&self.white),
            black: map(&self.black),
            y: self.y.to_string(),
            p,
            occupancy,
            constraints,
            mode: match self.mode {
                BlockMode::Pairs => "pairs".into(),
                BlockMode::None => "none".into(),
                BlockMode::Directed => "directed".into(),
            },
            grading: match &self.grading {
                Grading::Faces => "faces".into(),
                Grading::Var(v) => v.name().into(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub valence: usize,
    pub particles: Occupancy,
}

/// Serialized form: weights are polynomial strings keyed by valence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpecJson {
    #[serde(default)]
    pub white: BTreeMap<String, String>,
    #[serde(default)]
    pub black: BTreeMap<String, String>,
    #[serde(default = "zero_string")]
    pub y: String,
    #[serde(default)]
    pub p: u8,
    #[serde(default)]
    pub occupancy: BTreeMap<String, String>,
    #[serde(default)]
    pub constraints: Vec<ConstraintJson>,
    #[serde(default = "directed")]
    pub mode: String,
    #[serde(default = "g_string")]
    pub grading: String,
}

fn zero_string() -> String {
    "0".into()
}
fn directed() -> String {
    "directed".into()
}
fn g_string() -> String {
    "g".into()
}

impl ModelSpecJson {
    pub fn parse(s: &str) -> Result<ModelSpec, ModelError> {
        let j: ModelSpecJson = serde_json::from_str(s).map_err(|e| ModelError::InvalidSpec(e.to_string()))?;
        j.to_spec()
    }

    pub fn to_spec(&self) -> Result<ModelSpec, ModelError> {
        let poly = |s: &str| AuxPoly::parse(s).map_err(|e| ModelError::InvalidSpec(e.to_string()));
        let weights = |m: &BTreeMap<String, String>| -> Result<BTreeMap<usize, AuxPoly>, ModelError> {
            m.iter()
                .map(|(k, v)| {
                    let k: usize = k.parse().map_err(|_| ModelError::InvalidSpec(format!("bad valence {k:?}")))?;
                    Ok((k, poly(v)?))
                })
                .collect()
        };
        let mode = match self.mode.as_str() {
            "directed" => BlockMode::Directed,
            "pairs" => BlockMode::Pairs,
            "none" => BlockMode::None,
            m => return Err(ModelError::InvalidSpec(format!("unknown mode {m:?}"))),
        };
        let particles = if self.p == 0 {
            None
        } else {
            let mut z = vec![AuxPoly::one()];
            for i in 1..=self.p {
                let key = format!("z{i}");
                z.push(match self.occupancy.get(&key) {
                    Some(s) => poly(s)?,
                    None => AuxPoly::var(&key),
                });
            }
            Some(Particles { p: self.p, z, constraints: self.constraints.iter().map(|c| (c.valence, c.particles)).collect() })
        };
        let grading = match self.grading.as_str() {
            "faces" => Grading::Faces,
            v => Grading::Var(Var::new(v)),
        };
        let spec = ModelSpec { white: weights(&self.white)?, black: weights(&self.black)?, y: poly(&self.y)?, mode, particles, grading };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_example_parses() {
        let s = r#"{"white":{"4":"g"},"black":{"2":"1"},"y":"-1","p":1,"occupancy":{"z1":"z1"},"constraints":[{"valence":2,"particles":"required"}]}"#;
        let spec = ModelSpecJson::parse(s).unwrap();
        assert_eq!(spec.white[&4], AuxPoly::var("g"));
        assert_eq!(spec.y, AuxPoly::int(-1));
        assert!(spec.face_weight(Color::Black, 2, 0).is_none());
        assert_eq!(spec.face_weight(Color::Black, 2, 1), Some(AuxPoly::var("z1")));
        let back = ModelSpecJson::parse(&serde_json::to_string(&spec.to_json()).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn pairs_need_bivalent_black_faces() {
        let s = r#"{"white":{"4":"g"},"black":{"4":"g"},"mode":"pairs"}"#;
        assert!(ModelSpecJson::parse(s).is_err());
    }
}
