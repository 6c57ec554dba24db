//! Weight-two forms described as rational combinations of eta quotients, `Lambda_N`
//! and named newforms.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::num::{parse_rational, Rational};
use crate::series::{ExactSeries, SeriesError, Signature, UNIT};

use super::eisenstein::lambda;
use super::eta::eta_quotient;

const RECIPES_JSON: &str = include_str!("../data/recipes.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipeError {
    #[error("malformed recipe data: {0}")]
    Malformed(String),
    #[error("no recipe for {0}")]
    Unknown(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// `prod eta(k tau)^e`.
    EtaQuotient(Vec<(u32, i32)>),
    Lambda(u32),
    Newform(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: Rational,
    pub atom: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormRecipe {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone)]
pub struct Recipes {
    pub newforms: BTreeMap<String, FormRecipe>,
    pub t_tilde: BTreeMap<String, FormRecipe>,
    pub alternatives: BTreeMap<String, FormRecipe>,
}

#[derive(Deserialize)]
struct RawRecipes {
    newforms: BTreeMap<String, Vec<RawTerm>>,
    classes: BTreeMap<String, RawClass>,
}

#[derive(Deserialize)]
struct RawClass {
    t_tilde: Vec<RawTerm>,
    alternative: Option<Vec<RawTerm>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coef: String,
    eta: Option<Vec<(u32, i32)>>,
    lambda: Option<u32>,
    newform: Option<String>,
}

fn convert(raw: Vec<RawTerm>) -> Result<FormRecipe, RecipeError> {
    let mut terms = Vec::new();
    for t in raw {
        let coef = parse_rational(&t.coef).ok_or_else(|| RecipeError::Malformed(format!("coefficient {}", t.coef)))?;
        let atom = match (t.eta, t.lambda, t.newform) {
            (Some(e), None, None) => {
                if e.iter().any(|&(k, _)| k == 0) {
                    return Err(RecipeError::Malformed("eta argument must be a positive multiple of tau".into()));
                }
                Atom::EtaQuotient(e)
            }
            (None, Some(n), None) if n >= 2 => Atom::Lambda(n),
            (None, None, Some(f)) => Atom::Newform(f),
            _ => return Err(RecipeError::Malformed("each term needs exactly one of eta, lambda, newform".into())),
        };
        terms.push(Term { coef, atom });
    }
    Ok(FormRecipe { terms })
}

impl Recipes {
    pub fn from_json(text: &str) -> Result<Self, RecipeError> {
        let raw: RawRecipes = serde_json::from_str(text).map_err(|e| RecipeError::Malformed(e.to_string()))?;
        let mut newforms = BTreeMap::new();
        for (k, v) in raw.newforms {
            newforms.insert(k, convert(v)?);
        }
        let mut t_tilde = BTreeMap::new();
        let mut alternatives = BTreeMap::new();
        for (k, v) in raw.classes {
            t_tilde.insert(k.clone(), convert(v.t_tilde)?);
            if let Some(a) = v.alternative {
                alternatives.insert(k, convert(a)?);
            }
        }
        let out = Recipes { newforms, t_tilde, alternatives };
        for r in out.t_tilde.values().chain(out.alternatives.values()) {
            for t in &r.terms {
                if let Atom::Newform(name) = &t.atom {
                    if !out.newforms.contains_key(name) {
                        return Err(RecipeError::Unknown(name.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, recipe: &FormRecipe, order: i64) -> Result<ExactSeries, RecipeError> {
        let mut acc = ExactSeries::zero(Signature::q()).truncate(&[Some(order * UNIT)]);
        for t in &recipe.terms {
            let s = match &t.atom {
                Atom::EtaQuotient(f) => eta_quotient(f, order)?,
                Atom::Lambda(n) => lambda(*n as i64, order),
                Atom::Newform(name) => self.newform(name, order)?,
            };
            acc = acc.add(&s.scale(&t.coef))?;
        }
        Ok(acc)
    }

    pub fn newform(&self, name: &str, order: i64) -> Result<ExactSeries, RecipeError> {
        let r = self.newforms.get(name).ok_or_else(|| RecipeError::Unknown(name.to_string()))?;
        self.evaluate(r, order)
    }

    /// The weight-two form attached to a series label.
    pub fn t_tilde(&self, label: &str, order: i64) -> Result<ExactSeries, RecipeError> {
        let r = self.t_tilde.get(label).ok_or_else(|| RecipeError::Unknown(label.to_string()))?;
        self.evaluate(r, order)
    }

    /// The second expression, for labels that have one.
    pub fn t_tilde_alternative(&self, label: &str, order: i64) -> Result<Option<ExactSeries>, RecipeError> {
        match self.alternatives.get(label) {
            Some(r) => Ok(Some(self.evaluate(r, order)?)),
            None => Ok(None),
        }
    }
}

static RECIPES: OnceLock<Result<Recipes, RecipeError>> = OnceLock::new();

pub fn recipes() -> Result<&'static Recipes, RecipeError> {
    RECIPES.get_or_init(|| Recipes::from_json(RECIPES_JSON)).as_ref().map_err(Clone::clone)
}

/// `T~_g` for a series label, known below `q^order`.
pub fn t_tilde(label: &str, order: i64) -> Result<ExactSeries, RecipeError> {
    recipes()?.t_tilde(label, order)
}

pub fn newform(name: &str, order: i64) -> Result<ExactSeries, RecipeError> {
    recipes()?.newform(name, order)
}
