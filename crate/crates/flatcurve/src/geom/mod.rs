//! Developing maps, unfolded balls of the universal cover, exact flat
//! geodesics and the size/width functionals.

pub mod plane;
