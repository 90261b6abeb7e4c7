//! Packaged example networks.
//!
//! `polygons`: polygons, rhombuses and squares, the objects `R_1` and `S_1`,
//! and five modifiers between them. `figures`: a triangle, a square and a
//! trapezoid with their classes, for the set operations.

use crate::io;
use crate::network::Network;

pub const POLYGONS: &str = include_str!("../fixtures/polygons.oodn.json");
pub const FIGURES: &str = include_str!("../fixtures/figures.oodn.json");

pub fn polygons() -> Network {
    io::load(POLYGONS).expect("packaged fixture loads")
}

pub fn figures() -> Network {
    io::load(FIGURES).expect("packaged fixture loads")
}
