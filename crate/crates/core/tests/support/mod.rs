#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;

use cartan_forge::builder::{build_truncated, BuildLimits};
use cartan_forge::catalog::{builtin_catalog, instantiate_with_defaults, ConcreteCartan};
use cartan_forge::field::make_field;
use cartan_forge::par::Execution;

pub fn catalog_cc(name: &str) -> ConcreteCartan {
    instantiate_with_defaults(builtin_catalog().get(name).unwrap(), &Default::default()).unwrap()
}

/// Builder multiplicities up to `max_height`, for comparison with the oracle.
pub fn builder_multiplicities(p: u32, a: &[Vec<i64>], par: &[bool], max_height: u32) -> BTreeMap<Vec<u32>, usize> {
    let f = make_field(p, 1).unwrap();
    let cc = ConcreteCartan::from_integers("case", f, a, par);
    let m = build_truncated(&cc, BuildLimits { max_height, max_mult: 1 << 12 }, Execution::Sequential).unwrap();
    m.spaces().iter().map(|s| (s.weight.0.clone(), s.multiplicity())).collect()
}

pub fn oracle_multiplicities(p: u32, a: &[Vec<i64>], par: &[bool], max_height: u32) -> BTreeMap<Vec<u32>, usize> {
    oracle::Oracle::new(p as i64, a.to_vec(), par.to_vec()).multiplicities(max_height)
}
