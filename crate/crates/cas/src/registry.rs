//! Process-wide registries for odd generators and field names.
//!
//! Generator order is registration order and is the sign reference for every
//! canonical odd monomial. Registration is append-only.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

/// Odd constants registered at start-up, in canonical order.
pub const STANDARD_GENERATORS: [&str; 11] =
    ["eta1", "eta2", "K", "L", "K0", "L0", "K1", "D1", "D2", "D3", "D4"];

const EVEN_FIELDS: [&str; 11] = ["R", "S", "F", "G", "u", "rho", "p", "r1", "r2", "Phi", "Gam"];
const ODD_FIELDS: [&str; 4] = ["xi", "psi", "Lam", "Om"];

/// Single-character codes of the independent even variables usable in jet suffixes.
pub const JET_VARS: [char; 3] = ['s', 't', 'x'];

struct Registry {
    gens: Vec<String>,
    fields: BTreeMap<String, bool>,
}

fn registry() -> &'static RwLock<Registry> {
    static REG: OnceLock<RwLock<Registry>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut fields = BTreeMap::new();
        for f in EVEN_FIELDS {
            fields.insert(f.to_string(), false);
        }
        for f in ODD_FIELDS {
            fields.insert(f.to_string(), true);
        }
        RwLock::new(Registry {
            gens: STANDARD_GENERATORS.iter().map(|s| s.to_string()).collect(),
            fields,
        })
    })
}

/// Returns the id of `name`, registering it if new.
pub fn generator(name: &str) -> u16 {
    if let Some(id) = generator_id(name) {
        return id;
    }
    let mut reg = registry().write().expect("registry poisoned");
    if let Some(i) = reg.gens.iter().position(|g| g == name) {
        return i as u16;
    }
    reg.gens.push(name.to_string());
    (reg.gens.len() - 1) as u16
}

pub fn generator_id(name: &str) -> Option<u16> {
    let reg = registry().read().expect("registry poisoned");
    reg.gens.iter().position(|g| g == name).map(|i| i as u16)
}

pub fn generator_name(id: u16) -> String {
    let reg = registry().read().expect("registry poisoned");
    reg.gens
        .get(id as usize)
        .cloned()
        .unwrap_or_else(|| format!("g{id}"))
}

pub fn generator_count() -> usize {
    registry().read().expect("registry poisoned").gens.len()
}

/// `Some(odd)` if `name` is a registered field.
pub fn field_parity(name: &str) -> Option<bool> {
    registry()
        .read()
        .expect("registry poisoned")
        .fields
        .get(name)
        .copied()
}

pub fn register_field(name: &str, odd: bool) {
    registry()
        .write()
        .expect("registry poisoned")
        .fields
        .insert(name.to_string(), odd);
}

pub fn var_name(c: char) -> &'static str {
    match c {
        'x' => "x",
        't' => "t",
        's' => "s",
        _ => "?",
    }
}

pub fn var_code(name: &str) -> Option<char> {
    match name {
        "x" => Some('x'),
        "t" => Some('t'),
        "s" => Some('s'),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_order() {
        assert_eq!(generator_id("eta1"), Some(0));
        assert_eq!(generator_id("D4"), Some(10));
        assert_eq!(generator("eta2"), 1);
    }

    #[test]
    fn fields_known() {
        assert_eq!(field_parity("xi"), Some(true));
        assert_eq!(field_parity("R"), Some(false));
        assert_eq!(field_parity("C1"), None);
    }
}
