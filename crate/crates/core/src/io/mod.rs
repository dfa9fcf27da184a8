//! JSON formats, canonical emission and SVG rendering.

mod json;
pub mod svg;

pub use json::{
    emit_canonical, parse_coloring, parse_element, parse_pattern, parse_tiling, tiling_to_json, ElementDoc, TileDoc,
    TilingDoc,
};
