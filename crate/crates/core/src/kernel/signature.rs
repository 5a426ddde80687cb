use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::symbol::Symbol;
use super::types::{Sort, Type};
use super::KernelError;

/// Declared sorts and plain function symbols. The theory symbols and the
/// sorts `Int` and `Bool` are built in and always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<Sort>,
    symbols: BTreeMap<alloc::string::String, Symbol>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new()
    }
}

impl Signature {
    pub fn new() -> Signature {
        Signature { sorts: alloc::vec![Sort::int(), Sort::bool()], symbols: BTreeMap::new() }
    }

    pub fn add_sort(&mut self, name: &str) -> Result<Sort, KernelError> {
        let s = Sort::new(name);
        if name == super::types::DP {
            return Err(KernelError::Duplicate(name.to_string()));
        }
        if !self.sorts.contains(&s) {
            self.sorts.push(s.clone());
        }
        Ok(s)
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.iter().find(|s| s.name() == name)
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    /// Declares `name : ty`. Redeclaring with the same type is a no-op.
    pub fn declare(&mut self, name: &str, ty: Type) -> Result<Symbol, KernelError> {
        let mut used = Vec::new();
        ty.sorts(&mut used);
        for s in &used {
            if !self.sorts.contains(s) {
                return Err(KernelError::UnknownSort(s.name().to_string()));
            }
        }
        if let Some(old) = self.symbols.get(name) {
            if *old.ty() == ty {
                return Ok(old.clone());
            }
            return Err(KernelError::Duplicate(name.to_string()));
        }
        let s = Symbol::plain(name, ty);
        self.symbols.insert(name.to_string(), s.clone());
        Ok(s)
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    /// Plain symbols in name order.
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }
}
