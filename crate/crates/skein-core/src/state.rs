//! Finite formal linear combinations of canonical basis diagrams with
//! Laurent-polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{Diagram, DiagramError, Sign};
use crate::ring::{LaurentPoly, RingError, SignedMonomial, Var};

/// The boundary data a state vector lives over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Signature {
    Unoriented(usize),
    Oriented(Vec<Sign>),
}

impl Signature {
    pub fn of(d: &Diagram) -> Signature {
        if d.oriented {
            Signature::Oriented(d.boundary.clone())
        } else {
            Signature::Unoriented(d.boundary.len())
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Unoriented(n) => write!(f, "{}", ".".repeat(*n)),
            Signature::Oriented(signs) => {
                for s in signs {
                    f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
                }
                Ok(())
            }
        }
    }
}

/// One basis term: a representative diagram and its coefficient.
#[derive(Debug, Clone)]
pub struct Term {
    pub diagram: Diagram,
    pub coeff: LaurentPoly,
}

/// A finite map from canonical basis keys to nonzero coefficients.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub signature: Signature,
    terms: BTreeMap<String, Term>,
}

impl StateVector {
    pub fn new(signature: Signature) -> Self {
        StateVector {
            signature,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(diagram: Diagram, coeff: LaurentPoly) -> Result<Self, DiagramError> {
        let mut sv = StateVector::new(Signature::of(&diagram));
        sv.add(diagram, coeff)?;
        Ok(sv)
    }

    /// Merge in a weighted diagram, keyed by its canonical form.
    pub fn add(&mut self, diagram: Diagram, coeff: LaurentPoly) -> Result<(), DiagramError> {
        if coeff.is_zero() {
            return Ok(());
        }
        let key = diagram.canonical_key()?;
        match self.terms.get_mut(&key) {
            Some(t) => {
                t.coeff = &t.coeff + &coeff;
                if t.coeff.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, Term { diagram, coeff });
            }
        }
        Ok(())
    }

    pub fn add_all(&mut self, other: &StateVector) -> Result<(), DiagramError> {
        for t in other.terms.values() {
            self.add(t.diagram.clone(), t.coeff.clone())?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.terms.keys()
    }

    pub fn get(&self, key: &str) -> Option<&Term> {
        self.terms.get(key)
    }

    pub fn coeff(&self, key: &str) -> LaurentPoly {
        self.terms
            .get(key)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(LaurentPoly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.terms.iter()
    }

    /// The coefficient of the unique term, when the vector is a scalar
    /// multiple of a single basis diagram.
    pub fn sole_coeff(&self) -> Option<&LaurentPoly> {
        if self.terms.len() == 1 {
            self.terms.values().next().map(|t| &t.coeff)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> StateVector {
        let mut out = StateVector::new(self.signature.clone());
        if c.is_zero() {
            return out;
        }
        for (k, t) in &self.terms {
            out.terms.insert(
                k.clone(),
                Term {
                    diagram: t.diagram.clone(),
                    coeff: &t.coeff * c,
                },
            );
        }
        out
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        let mut out = self.clone();
        for t in other.terms.values() {
            out.add(t.diagram.clone(), -&t.coeff)
                .expect("existing keys stay canonical");
        }
        out
    }

    /// Apply a diagram map to every basis key (re-keying) with coefficients
    /// untouched.
    pub fn map_diagrams(
        &self,
        signature: Signature,
        f: impl Fn(&Diagram) -> Diagram,
    ) -> Result<StateVector, DiagramError> {
        let mut out = StateVector::new(signature);
        for t in self.terms.values() {
            out.add(f(&t.diagram), t.coeff.clone())?;
        }
        Ok(out)
    }

    pub fn substitute_coeffs(
        &self,
        var: &Var,
        image: &SignedMonomial,
    ) -> Result<StateVector, RingError> {
        let mut out = StateVector::new(self.signature.clone());
        for (k, t) in &self.terms {
            let coeff = t.coeff.substitute(var, image)?;
            if !coeff.is_zero() {
                out.terms.insert(
                    k.clone(),
                    Term {
                        diagram: t.diagram.clone(),
                        coeff,
                    },
                );
            }
        }
        Ok(out)
    }
}

impl PartialEq for StateVector {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .all(|(k, t)| other.terms.get(k).map(|o| o.coeff == t.coeff).unwrap_or(false))
    }
}

impl Eq for StateVector {}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, t)| format!("({}) * [{}]", t.coeff.to_canonical_text(), k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
