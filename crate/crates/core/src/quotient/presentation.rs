use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free::{ElementTerm, FreeLieAlgebra, GeneratorSet, GeneratorSpec, LieElement};
use crate::zn::Modulus;

pub const DEFAULT_CUTOFF: usize = 6;

/// A family of homogeneous relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelatorFamily {
    /// Every monomial of zn-degree 0.
    ZeroComponentKill,
    /// `[[x_d1, x_d2], [x_d3, x_d4]]` for every (-1)-independent `(d1, d2, d3, d4)`.
    SelectiveMetabelian,
    /// `[[x_d1, x_d2], [x_d3, x]]` for every (-1)-independent `(d1, d2, d3)`, `x` arbitrary.
    SelectSecond,
    /// Fine-degree homogeneous elements supplied by the caller.
    ExplicitList(Vec<LieElement>),
}

/// JSON form of [`RelatorFamily`], tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RelatorFamilySpec {
    ZeroComponentKill,
    SelectiveMetabelian,
    SelectSecond,
    ExplicitList { elements: Vec<Vec<ElementTerm>> },
}

fn default_cutoff() -> usize {
    DEFAULT_CUTOFF
}

/// JSON form of [`GradedPresentation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub modulus: u64,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relator_families: Vec<RelatorFamilySpec>,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
}

/// Free Lie algebra on graded generators modulo the ideal generated by the
/// relator families and by every monomial longer than `cutoff`.
#[derive(Clone)]
pub struct GradedPresentation {
    algebra: Arc<FreeLieAlgebra>,
    families: Vec<RelatorFamily>,
    cutoff: usize,
}

impl std::fmt::Debug for GradedPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedPresentation")
            .field("generators", &self.algebra.generators().specs())
            .field("families", &self.families)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl GradedPresentation {
    pub fn new(gens: GeneratorSet, families: Vec<RelatorFamily>, cutoff: usize) -> Result<Self> {
        Self::with_algebra(Arc::new(FreeLieAlgebra::new(gens)), families, cutoff)
    }

    /// Shares an existing free algebra and its caches.
    pub fn with_algebra(
        algebra: Arc<FreeLieAlgebra>,
        families: Vec<RelatorFamily>,
        cutoff: usize,
    ) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidCutoff);
        }
        let gens = algebra.generators();
        if families.contains(&RelatorFamily::ZeroComponentKill) {
            if let Some(g) = gens.iter().find(|g| g.degree.is_zero()) {
                return Err(Error::ZeroDegreeGenerator(g.name.clone()));
            }
        }
        for fam in &families {
            if let RelatorFamily::ExplicitList(elems) = fam {
                for e in elems {
                    for (m, _) in e.terms() {
                        if m.word().iter().any(|&l| l as usize >= gens.len()) {
                            return Err(Error::Parse(
                                "relator uses a letter outside the generating set".into(),
                            ));
                        }
                    }
                    algebra.fine_degree_of_element(e)?;
                }
            }
        }
        Ok(GradedPresentation {
            algebra,
            families,
            cutoff,
        })
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<Self> {
        let gens = if spec.generators.is_empty() {
            GeneratorSet::empty(Modulus::new(spec.modulus)?)
        } else {
            GeneratorSet::new(spec.modulus, &spec.generators)?
        };
        let algebra = Arc::new(FreeLieAlgebra::new(gens));
        let mut families = Vec::with_capacity(spec.relator_families.len());
        for f in &spec.relator_families {
            families.push(match f {
                RelatorFamilySpec::ZeroComponentKill => RelatorFamily::ZeroComponentKill,
                RelatorFamilySpec::SelectiveMetabelian => RelatorFamily::SelectiveMetabelian,
                RelatorFamilySpec::SelectSecond => RelatorFamily::SelectSecond,
                RelatorFamilySpec::ExplicitList { elements } => RelatorFamily::ExplicitList(
                    elements
                        .iter()
                        .map(|terms| algebra.element_from_json(terms))
                        .collect::<Result<_>>()?,
                ),
            });
        }
        Self::with_algebra(algebra, families, spec.cutoff)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PresentationSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> PresentationSpec {
        PresentationSpec {
            modulus: self.modulus().get(),
            generators: self.generators().specs(),
            relator_families: self
                .families
                .iter()
                .map(|f| match f {
                    RelatorFamily::ZeroComponentKill => RelatorFamilySpec::ZeroComponentKill,
                    RelatorFamily::SelectiveMetabelian => RelatorFamilySpec::SelectiveMetabelian,
                    RelatorFamily::SelectSecond => RelatorFamilySpec::SelectSecond,
                    RelatorFamily::ExplicitList(elems) => RelatorFamilySpec::ExplicitList {
                        elements: elems
                            .iter()
                            .map(|e| self.algebra.element_to_json(e))
                            .collect(),
                    },
                })
                .collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        Self::with_algebra(self.algebra.clone(), self.families.clone(), cutoff)
    }

    pub fn with_families(&self, families: Vec<RelatorFamily>) -> Result<Self> {
        Self::with_algebra(self.algebra.clone(), families, self.cutoff)
    }

    pub fn algebra(&self) -> &Arc<FreeLieAlgebra> {
        &self.algebra
    }

    pub fn generators(&self) -> &GeneratorSet {
        self.algebra.generators()
    }

    pub fn modulus(&self) -> Modulus {
        self.generators().modulus()
    }

    pub fn families(&self) -> &[RelatorFamily] {
        &self.families
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn has_family(&self, family: &RelatorFamily) -> bool {
        self.families.contains(family)
    }

    pub fn kills_zero_component(&self) -> bool {
        self.has_family(&RelatorFamily::ZeroComponentKill)
    }
}
