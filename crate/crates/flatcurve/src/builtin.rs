//! The four surface documents shipped with the repository, embedded so that
//! library users and tests get them without touching the filesystem.

use crate::surface::{load_surface_str, Surface};

pub const SQUARE_TORUS: &str = include_str!("../../../surfaces/square_torus.bsf");
pub const GOLDEN_TORUS: &str = include_str!("../../../surfaces/golden_torus.bsf");
pub const PILLOWCASE: &str = include_str!("../../../surfaces/pillowcase.bsf");
pub const L_ORIGAMI: &str = include_str!("../../../surfaces/l_origami.bsf");

pub fn square_torus() -> Surface {
    load_surface_str(SQUARE_TORUS).expect("shipped square torus must load")
}

/// Flat torus whose vertical direction is the expanding eigendirection of
/// the cat map; the first-return map to the horizontal circle is the golden
/// rotation.
pub fn golden_torus() -> Surface {
    load_surface_str(GOLDEN_TORUS).expect("shipped golden torus must load")
}

pub fn pillowcase() -> Surface {
    load_surface_str(PILLOWCASE).expect("shipped pillowcase must load")
}

pub fn l_origami() -> Surface {
    load_surface_str(L_ORIGAMI).expect("shipped L origami must load")
}
