use alloc::collections::BTreeMap;
use core::fmt;

use super::symbol::Var;
use super::term::Term;
use super::KernelError;

/// A finite, type-preserving map from variables to terms. Variables outside
/// the domain map to themselves.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subst(BTreeMap<Var, Term>);

impl Subst {
    pub fn new() -> Subst {
        Subst(BTreeMap::new())
    }

    pub fn insert(&mut self, x: Var, t: Term) -> Result<(), KernelError> {
        if x.ty() != t.ty() {
            return Err(KernelError::SubstitutionType { var: x, term: t });
        }
        self.0.insert(x, t);
        Ok(())
    }

    /// Builder form of [`Subst::insert`].
    pub fn with(mut self, x: Var, t: Term) -> Result<Subst, KernelError> {
        self.insert(x, t)?;
        Ok(self)
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `σ;δ` with `(σ;δ)(x) = σ(x)δ`.
    pub fn then(&self, delta: &Subst) -> Subst {
        let mut out: BTreeMap<Var, Term> =
            self.0.iter().map(|(x, t)| (x.clone(), t.substitute(delta))).collect();
        for (x, t) in &delta.0 {
            out.entry(x.clone()).or_insert_with(|| t.clone());
        }
        Subst(out)
    }
}

impl FromIterator<(Var, Term)> for Subst {
    /// Panics on a type mismatch; use [`Subst::insert`] for checked input.
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Subst::new();
        for (x, t) in iter {
            s.insert(x, t).expect("type-preserving substitution");
        }
        s
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}↦{t}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
