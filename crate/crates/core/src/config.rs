//! JSON descriptions of systems and verification runs.
//!
//! Complex numbers serialize as `[re, im]` pairs and matrices are
//! row-major, one matrix per algebra block. All randomness in a run
//! flows from the single `seed` field through ChaCha20 with one
//! numbered stream per task, so reports are reproducible.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, MultiMatrixAlgebra};
use crate::automorphism::Automorphism;
use crate::builtin;
use crate::error::{Result, TcdsError};
use crate::group::FiniteGroup;
use crate::linalg::CMat;
use crate::system::TwistedSystem;

/// Version stamped into every config and report this build understands.
pub const SCHEMA_VERSION: u32 = 1;

/// Complex scalar as a `[re, im]` pair.
pub type ComplexData = [f64; 2];
/// Row-major square matrix of complex scalars.
pub type MatrixData = Vec<Vec<ComplexData>>;
/// One matrix per algebra block.
pub type ElementData = Vec<MatrixData>;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn default_seed() -> u64 {
    0
}

fn default_tolerance() -> f64 {
    1e-9
}

fn default_samples() -> usize {
    20
}

/// A full run description: which system, which tasks, and the knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub system: SystemConfig,
    /// Task names; empty means "whatever the command defaults to".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Number of random samples per sampled check.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl RunConfig {
    pub fn for_system(system: SystemConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            system,
            tasks: Vec::new(),
            seed: default_seed(),
            tolerance: default_tolerance(),
            samples: default_samples(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| TcdsError::BadBuilder(format!("config does not parse: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(TcdsError::BadBuilder(format!(
                "config field schema_version: expected {SCHEMA_VERSION}, got {}",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Either a reference to a gallery system or a fully spelled-out one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemConfig {
    Builtin(BuiltinRef),
    Custom(Box<CustomSystem>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinRef {
    pub builtin: String,
}

/// Raw system data: group, algebra, action, and optional twist
/// (omitted twist means σ ≡ 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSystem {
    pub name: String,
    pub algebra: AlgebraConfig,
    pub group: GroupConfig,
    pub alpha: Vec<AutomorphismConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<ElementData>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub block_dims: Vec<usize>,
    /// Display name; defaults to the system name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupConfig {
    Cyclic { cyclic: usize },
    Dihedral { dihedral: usize },
    Product { product: Vec<GroupConfig> },
    Table { table: Vec<Vec<usize>> },
}

/// α_g as a block permutation plus a unitary (omitted unitary means 1),
/// acting as a ↦ u · a∘perm · u*.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismConfig {
    pub block_perm: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<ElementData>,
}

/// The raw pieces of a system, for callers that want to scan axioms
/// themselves before (or instead of) constructing the validated system.
pub struct SystemParts {
    pub name: String,
    pub algebra: Arc<MultiMatrixAlgebra>,
    pub group: Arc<FiniteGroup>,
    pub alpha: Vec<Automorphism>,
    pub sigma: Vec<Vec<AlgebraElement>>,
}

impl SystemParts {
    pub fn build(self) -> Result<Arc<TwistedSystem>> {
        TwistedSystem::new(self.name, self.algebra, self.group, self.alpha, self.sigma)
    }
}

impl GroupConfig {
    pub fn build(&self) -> Result<Arc<FiniteGroup>> {
        match self {
            Self::Cyclic { cyclic } => {
                if *cyclic == 0 {
                    return Err(TcdsError::BadBuilder("group.cyclic: order must be positive".into()));
                }
                Ok(FiniteGroup::cyclic(*cyclic))
            }
            Self::Dihedral { dihedral } => {
                if *dihedral == 0 {
                    return Err(TcdsError::BadBuilder(
                        "group.dihedral: rotation order must be positive".into(),
                    ));
                }
                Ok(FiniteGroup::dihedral(*dihedral))
            }
            Self::Product { product } => {
                let mut built: Option<Arc<FiniteGroup>> = None;
                for factor in product {
                    let next = factor.build()?;
                    built = Some(match built {
                        None => next,
                        Some(acc) => FiniteGroup::product(&acc, &next),
                    });
                }
                built.ok_or_else(|| {
                    TcdsError::BadBuilder("group.product: needs at least one factor".into())
                })
            }
            Self::Table { table } => Ok(Arc::new(FiniteGroup::from_table("custom", table.clone())?)),
        }
    }
}

fn element_from_data(
    algebra: &Arc<MultiMatrixAlgebra>,
    data: &ElementData,
    field: &str,
) -> Result<AlgebraElement> {
    let dims = algebra.block_dims();
    if data.len() != dims.len() {
        return Err(TcdsError::BadBuilder(format!(
            "{field}: expected {} blocks, got {}",
            dims.len(),
            data.len()
        )));
    }
    let mut blocks = Vec::with_capacity(dims.len());
    for (k, (mat, &n)) in data.iter().zip(dims).enumerate() {
        if mat.len() != n || mat.iter().any(|row| row.len() != n) {
            return Err(TcdsError::BadBuilder(format!(
                "{field}, block {k}: expected a {n}x{n} matrix"
            )));
        }
        let flat: Vec<Complex64> =
            mat.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
        blocks.push(CMat::from_row_slice(n, n, &flat));
    }
    algebra.from_blocks(blocks)
}

fn element_to_data(a: &AlgebraElement) -> ElementData {
    a.blocks()
        .iter()
        .map(|m| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect()
        })
        .collect()
}

impl SystemConfig {
    pub fn builtin(name: impl Into<String>) -> Self {
        Self::Builtin(BuiltinRef { builtin: name.into() })
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Builtin(b) => &b.builtin,
            Self::Custom(c) => &c.name,
        }
    }

    /// Assemble the raw pieces without running the axiom gate.
    pub fn build_parts(&self) -> Result<SystemParts> {
        match self {
            Self::Builtin(b) => {
                let sys = builtin::by_name(&b.builtin)?;
                let n = sys.order();
                Ok(SystemParts {
                    name: sys.name().to_string(),
                    algebra: sys.algebra().clone(),
                    group: sys.group().clone(),
                    alpha: (0..n).map(|g| sys.alpha(g).clone()).collect(),
                    sigma: (0..n)
                        .map(|g| (0..n).map(|h| sys.sigma(g, h).clone()).collect())
                        .collect(),
                })
            }
            Self::Custom(c) => {
                let algebra_name = c.algebra.name.clone().unwrap_or_else(|| c.name.clone());
                let algebra = MultiMatrixAlgebra::new(algebra_name, c.algebra.block_dims.clone())?;
                let group = c.group.build()?;
                let n = group.order();
                if c.alpha.len() != n {
                    return Err(TcdsError::BadBuilder(format!(
                        "alpha: expected {n} automorphisms (one per group element), got {}",
                        c.alpha.len()
                    )));
                }
                let mut alpha = Vec::with_capacity(n);
                for (g, ac) in c.alpha.iter().enumerate() {
                    let unitary = match &ac.unitary {
                        None => algebra.one(),
                        Some(data) => {
                            element_from_data(&algebra, data, &format!("alpha[{g}].unitary"))?
                        }
                    };
                    alpha.push(
                        Automorphism::new(algebra.clone(), ac.block_perm.clone(), unitary)
                            .map_err(|e| {
                                TcdsError::BadBuilder(format!("alpha[{g}]: {e}"))
                            })?,
                    );
                }
                let sigma = match &c.sigma {
                    None => vec![vec![algebra.one(); n]; n],
                    Some(rows) => {
                        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                            return Err(TcdsError::BadBuilder(format!(
                                "sigma: expected an {n}x{n} table"
                            )));
                        }
                        let mut sigma = Vec::with_capacity(n);
                        for (g, row) in rows.iter().enumerate() {
                            let mut out = Vec::with_capacity(n);
                            for (h, data) in row.iter().enumerate() {
                                out.push(element_from_data(
                                    &algebra,
                                    data,
                                    &format!("sigma[{g}][{h}]"),
                                )?);
                            }
                            sigma.push(out);
                        }
                        sigma
                    }
                };
                Ok(SystemParts { name: c.name.clone(), algebra, group, alpha, sigma })
            }
        }
    }

    /// Build and validate the system.
    pub fn build(&self) -> Result<Arc<TwistedSystem>> {
        match self {
            Self::Builtin(b) => builtin::by_name(&b.builtin),
            Self::Custom(_) => self.build_parts()?.build(),
        }
    }

    /// Spell out a system as a self-contained custom description
    /// (explicit multiplication table, explicit tables for α and σ).
    pub fn describe(sys: &TwistedSystem) -> Self {
        let n = sys.order();
        let group = sys.group();
        let table: Vec<Vec<usize>> =
            (0..n).map(|g| (0..n).map(|h| group.mul(g, h)).collect()).collect();
        let alpha = (0..n)
            .map(|g| {
                let a = sys.alpha(g);
                let trivial = (a.unitary() - &sys.algebra().one()).norm() == 0.0;
                AutomorphismConfig {
                    block_perm: a.block_perm().to_vec(),
                    unitary: if trivial { None } else { Some(element_to_data(a.unitary())) },
                }
            })
            .collect();
        let twisted = !sys.is_twist_trivial(0.0);
        let sigma = twisted.then(|| {
            (0..n)
                .map(|g| (0..n).map(|h| element_to_data(sys.sigma(g, h))).collect())
                .collect()
        });
        Self::Custom(Box::new(CustomSystem {
            name: sys.name().to_string(),
            algebra: AlgebraConfig {
                block_dims: sys.algebra().block_dims().to_vec(),
                name: Some(sys.algebra().name().to_string()),
            },
            group: GroupConfig::Table { table },
            alpha,
            sigma,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_reference_builds_and_roundtrips() {
        let cfg = RunConfig::for_system(SystemConfig::builtin("pauli"));
        let text = cfg.to_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(back.to_json(), text);
        let sys = back.system.build().unwrap();
        assert_eq!(sys.name(), "pauli");
        assert_eq!(sys.order(), 4);
    }

    #[test]
    fn every_gallery_system_survives_describe_then_build() {
        for sys in builtin::all() {
            let described = SystemConfig::describe(&sys);
            let text = serde_json::to_string_pretty(&described).unwrap();
            let parsed: SystemConfig = serde_json::from_str(&text).unwrap();
            assert_eq!(parsed, described);
            let rebuilt = parsed.build().unwrap();
            assert_eq!(rebuilt.name(), sys.name());
            assert_eq!(rebuilt.order(), sys.order());
            assert_eq!(rebuilt.algebra().block_dims(), sys.algebra().block_dims());
            let n = sys.order();
            for g in 0..n {
                for h in 0..n {
                    assert!((rebuilt.sigma(g, h) - sys.sigma(g, h)).norm() < 1e-15);
                }
                assert!(rebuilt.alpha(g).approx_eq(sys.alpha(g), 1e-15));
            }
        }
    }

    #[test]
    fn corrupted_sigma_passes_parsing_but_fails_the_axiom_gate() {
        let pauli = builtin::pauli();
        let mut described = SystemConfig::describe(&pauli);
        // σ(1,2) = −1 in the Pauli bicharacter; flipping its sign keeps
        // unitarity and normalization but breaks the 2-cocycle identity.
        if let SystemConfig::Custom(c) = &mut described {
            c.sigma.as_mut().unwrap()[1][2][0][0][0] = [1.0, 0.0];
        }
        let text = serde_json::to_string(&described).unwrap();
        let parsed: SystemConfig = serde_json::from_str(&text).unwrap();
        let err = parsed.build().unwrap_err();
        assert!(matches!(err, TcdsError::AxiomFailure(_)));
        let parts = parsed.build_parts().unwrap();
        let witnesses =
            crate::system::axiom_witnesses(&parts.algebra, &parts.group, &parts.alpha, &parts.sigma);
        assert!(witnesses.iter().any(|w| w.contains("(g,h,k)")));
    }

    #[test]
    fn malformed_configs_are_rejected_with_field_pointers() {
        assert!(RunConfig::from_json("{").is_err());
        let unknown = r#"{"system": {"builtin": "pauli"}, "bogus": 1}"#;
        assert!(RunConfig::from_json(unknown).is_err());
        let wrong_version = r#"{"schema_version": 99, "system": {"builtin": "pauli"}}"#;
        let err = RunConfig::from_json(wrong_version).unwrap_err();
        assert!(err.to_string().contains("schema_version"));
        let missing_system = r#"{"seed": 3}"#;
        assert!(RunConfig::from_json(missing_system).is_err());
    }

    #[test]
    fn group_configs_build_all_constructors() {
        let z6 = GroupConfig::Product {
            product: vec![GroupConfig::Cyclic { cyclic: 2 }, GroupConfig::Cyclic { cyclic: 3 }],
        };
        assert_eq!(z6.build().unwrap().order(), 6);
        assert_eq!(GroupConfig::Dihedral { dihedral: 4 }.build().unwrap().order(), 8);
        let bad = GroupConfig::Table { table: vec![vec![0, 1], vec![1, 1]] };
        assert!(bad.build().is_err());
    }
}
