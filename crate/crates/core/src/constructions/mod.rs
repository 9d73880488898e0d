//! Geometries derived from other geometries: metric cones, warped products,
//! hypersurfaces of Kähler manifolds and circle submersions, each with the
//! closed-form predictions they are checked against.

pub mod cone;
pub mod hypersurface;
pub mod registry;
pub mod submersion;
pub mod warped;

pub use cone::{build_cone, cone_closed_forms, ConeBundle, ConeCase};
pub use hypersurface::{induce_hypersurface, HypersurfaceReport, HypersurfaceSpec};
pub use registry::{lookup, Target, TARGETS};
pub use submersion::{check_submersion_lift, hopf_pair, LiftReport, SubmersionPair};
pub use warped::{build_r_warped_contact, build_warped, RWarped, WarpedProduct, WarpedSpec};

use alloc::string::String;

use crate::chart::Chart;
use crate::expr::valid_coordinate_name;

/// `base` with trailing underscores added until it is not a coordinate of `chart`.
pub(crate) fn fresh_name(chart: &Chart, base: &str) -> String {
    let mut name = String::from(base);
    while chart.coords().iter().any(|c| *c == name) || !valid_coordinate_name(&name) {
        name.push('_');
    }
    name
}
