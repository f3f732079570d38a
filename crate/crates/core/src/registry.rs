//! Known `(d_c, tau_c)` values for codes too large to enumerate.

use alloc::string::String;
use alloc::vec::Vec;

use crate::code::{CodeParams, Family};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub d_c: u32,
    pub tau_c: u64,
    pub source: String,
}

impl RegistryEntry {
    pub fn new(family: Family, n: usize, k: usize, d_c: u32, tau_c: u64, source: impl Into<String>) -> Result<Self> {
        // Reuse the parameter checks.
        CodeParams::new(family, n, k, d_c, tau_c)?;
        Ok(RegistryEntry { family, n, k, d_c, tau_c, source: source.into() })
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            name: self.family.code_name(self.n, self.k),
            family: self.family,
            n: self.n,
            k: self.k,
            d_c: self.d_c,
            tau_c: self.tau_c,
        }
    }

    fn key(&self) -> (Family, usize, usize) {
        (self.family, self.n, self.k)
    }
}

/// A user entry that replaced a different existing one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Override {
    pub previous: RegistryEntry,
    pub replacement: RegistryEntry,
}

/// Entries unique on `(family, n, k)`, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Weight data shipped with the crate. Anything else must come from a
    /// user-supplied table.
    pub fn bundled() -> Self {
        const ROWS: [(Family, usize, usize, u32, u64, &str); 5] = [
            (Family::Ebch, 128, 120, 4, 85_344, "bundled: EBCH weight table"),
            (Family::Ebch, 128, 113, 6, 341_376, "bundled: EBCH weight table"),
            (Family::Ebch, 128, 106, 8, 774_192, "bundled: EBCH weight table"),
            (Family::Polar, 128, 99, 8, 188_976, "bundled: RM(4,7) minimum-weight count"),
            (Family::Polar, 128, 100, 4, 32, "bundled: partial-order polar, tau_4 = 768"),
        ];
        let entries = ROWS
            .iter()
            .map(|&(f, n, k, d, t, s)| RegistryEntry::new(f, n, k, d, t, s).expect("bundled entry is valid"))
            .collect();
        Registry { entries }
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn lookup(&self, family: Family, n: usize, k: usize) -> Result<&RegistryEntry> {
        self.entries.iter().find(|e| e.key() == (family, n, k)).ok_or(Error::NotFound { family, n, k })
    }

    pub fn family(&self, family: Family) -> impl Iterator<Item = &RegistryEntry> {
        self.entries.iter().filter(move |e| e.family == family)
    }

    /// Inserts `entry`, replacing any entry with the same key. Returns the
    /// displaced entry when its values differ.
    pub fn insert(&mut self, entry: RegistryEntry) -> Option<Override> {
        match self.entries.iter_mut().find(|e| e.key() == entry.key()) {
            Some(slot) => {
                let previous = core::mem::replace(slot, entry.clone());
                (previous.d_c != entry.d_c || previous.tau_c != entry.tau_c)
                    .then_some(Override { previous, replacement: entry })
            }
            None => {
                self.entries.push(entry);
                None
            }
        }
    }

    /// Merges user entries over the current ones; user entries win.
    pub fn merge(&mut self, entries: impl IntoIterator<Item = RegistryEntry>) -> Vec<Override> {
        entries.into_iter().filter_map(|e| self.insert(e)).collect()
    }

    /// Rejects duplicate keys within a single table.
    pub fn from_entries(entries: Vec<RegistryEntry>) -> Result<Self> {
        let mut reg = Registry::empty();
        for e in entries {
            if reg.lookup(e.family, e.n, e.k).is_ok() {
                return Err(invalid(alloc::format!("duplicate registry entry {} ({},{})", e.family, e.n, e.k)));
            }
            reg.entries.push(e);
        }
        Ok(reg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lookups() {
        let r = Registry::bundled();
        let e = r.lookup(Family::Ebch, 128, 106).unwrap();
        assert_eq!((e.d_c, e.tau_c), (8, 774_192));
        let e = r.lookup(Family::Ebch, 128, 113).unwrap();
        assert_eq!((e.d_c, e.tau_c), (6, 341_376));
        let e = r.lookup(Family::Ebch, 128, 120).unwrap();
        assert_eq!((e.d_c, e.tau_c), (4, 85_344));
        assert_eq!(r.lookup(Family::Ebch, 128, 99), Err(Error::NotFound { family: Family::Ebch, n: 128, k: 99 }));
    }

    #[test]
    fn user_entries_win() {
        let mut r = Registry::bundled();
        let user = RegistryEntry::new(Family::Ebch, 128, 106, 8, 1, "user").unwrap();
        let same = RegistryEntry::new(Family::Ebch, 128, 113, 6, 341_376, "user").unwrap();
        let new = RegistryEntry::new(Family::Ebch, 128, 99, 10, 12_345, "user").unwrap();
        let overrides = r.merge([user.clone(), same, new]);
        assert_eq!(overrides.len(), 1);
        assert_eq!(overrides[0].replacement, user);
        assert_eq!(r.lookup(Family::Ebch, 128, 106).unwrap().tau_c, 1);
        assert_eq!(r.lookup(Family::Ebch, 128, 99).unwrap().d_c, 10);
        assert_eq!(r.entries().len(), 6);
    }

    #[test]
    fn entry_validation() {
        assert!(RegistryEntry::new(Family::Ebch, 128, 106, 8, 0, "x").is_err());
        assert!(RegistryEntry::new(Family::Ebch, 128, 106, 0, 3, "x").is_err());
        assert!(RegistryEntry::new(Family::Ebch, 128, 129, 8, 3, "x").is_err());
        let e = RegistryEntry::new(Family::Custom, 8, 4, 4, 14, "x").unwrap();
        assert!(Registry::from_entries(alloc::vec![e.clone(), e]).is_err());
    }
}
