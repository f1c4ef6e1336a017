//! The groups exercised by the battery: every G(m,p,r) up to an order bound and the
//! exceptional groups with embedded data.

use crate::group::GroupSpec;

pub const DEFAULT_MAX_ORDER: u64 = 2000;
pub const DEFAULT_MAX_M: u32 = 24;
pub const CATALOG_EXCEPTIONAL: [u32; 5] = [4, 8, 25, 26, 28];

const EXCEPTIONAL_ORDERS: [(u32, u64); 5] = [(4, 24), (8, 96), (25, 648), (26, 1296), (28, 1152)];

/// Order of G(m,p,r), or None on overflow.
pub fn imprimitive_order(m: u32, p: u32, r: u32) -> Option<u64> {
    let mut o = (m as u64).checked_pow(r)?;
    for i in 2..=r as u64 {
        o = o.checked_mul(i)?;
    }
    Some(o / p as u64)
}

/// G(m,p,r) with order at most `max_order` and m at most `max_m`, then the exceptional
/// groups within the bound. Rank one appears only as G(m,1,1).
pub fn catalog(max_order: u64, max_m: u32) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for r in 1..=8u32 {
        for m in 1..=max_m {
            for p in (1..=m).filter(|p| m % p == 0) {
                if r == 1 && p != 1 {
                    continue;
                }
                if imprimitive_order(m, p, r).is_some_and(|o| o <= max_order) {
                    out.push(GroupSpec::Imprimitive { m, p, r });
                }
            }
        }
    }
    for (st, order) in EXCEPTIONAL_ORDERS {
        if order <= max_order {
            out.push(GroupSpec::Exceptional(st));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalog() {
        let c: Vec<String> = catalog(8, 4).iter().map(|s| s.to_string()).collect();
        assert!(c.contains(&"G(2,1,2)".to_string()));
        assert!(c.contains(&"G(1,1,3)".to_string()));
        assert!(!c.contains(&"G(2,2,1)".to_string()));
        assert!(!c.iter().any(|s| s.starts_with("ST")));
        assert_eq!(imprimitive_order(3, 3, 3), Some(54));
    }
}
