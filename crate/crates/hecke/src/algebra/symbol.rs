//! Interned variable names.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// A commuting indeterminate, identified by its name.
///
/// Names are interned in a process-wide append-only table, so two symbols
/// with the same name are always the same symbol. Comparison and hashing use
/// the interned id and are therefore cheap; the id order is the creation
/// order and carries no mathematical meaning.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

fn table() -> &'static RwLock<Interner> {
    static TABLE: OnceLock<RwLock<Interner>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Interner::default()))
}

impl Symbol {
    /// Returns the symbol with the given name, creating it on first use.
    pub fn new(name: &str) -> Symbol {
        if let Some(&id) = table().read().expect("symbol table poisoned").ids.get(name) {
            return Symbol(id);
        }
        let mut t = table().write().expect("symbol table poisoned");
        if let Some(&id) = t.ids.get(name) {
            return Symbol(id);
        }
        let id = u32::try_from(t.names.len()).expect("symbol table overflow");
        let name: Arc<str> = Arc::from(name);
        t.names.push(name.clone());
        t.ids.insert(name, id);
        Symbol(id)
    }

    /// Looks up an existing symbol without creating it.
    pub fn lookup(name: &str) -> Option<Symbol> {
        table().read().expect("symbol table poisoned").ids.get(name).map(|&id| Symbol(id))
    }

    pub fn name(&self) -> Arc<str> {
        table().read().expect("symbol table poisoned").names[self.0 as usize].clone()
    }

    /// The i-th torus coordinate `z{i}` (1-based, as in `z1, z2, ...`).
    pub fn z(i: usize) -> Symbol {
        Symbol::new(&format!("z{i}"))
    }

    /// The square root `u` of the Hecke parameter `v = u^2`.
    pub fn u() -> Symbol {
        Symbol::new("u")
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The torus coordinates `z1..zd`.
pub fn z_symbols(d: usize) -> Vec<Symbol> {
    (1..=d).map(Symbol::z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Symbol::new("alpha_test");
        let b = Symbol::new("alpha_test");
        assert_eq!(a, b);
        assert_eq!(&*a.name(), "alpha_test");
        assert_eq!(Symbol::lookup("alpha_test"), Some(a));
        assert_eq!(Symbol::lookup("never_created_symbol_xyz"), None);
    }
}
