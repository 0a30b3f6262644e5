//! Contragredient Lie (super)algebras over small finite fields: build the
//! root system of g(A) from a Cartan matrix, read off superdimensions and
//! isotropy, and move between bases by odd reflections.

pub mod analysis;
pub mod builder;
pub mod catalog;
pub mod cli;
pub mod emit;
pub mod field;
pub mod par;
pub mod reflection;
