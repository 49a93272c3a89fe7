//! Riemannian metric fields and the world function they induce.

pub mod geodesic;
pub mod metric;
pub mod sphere;
pub mod transport;
pub mod world;

pub use geodesic::{geodesic_bvp, geodesic_bvp_with, geodesic_ivp, BvpOptions, GeodesicPath};
pub use metric::{Christoffel, MetricField, MetricSource};
pub use sphere::{great_circle_path, AnalyticSphere};
pub use transport::{
    collinearity_cone, collinearity_cone_with, infinitesimal_parallelism_residual, parallelism_residual_wf, sigma_mixed_derivatives,
    transport_conventional, CollinearityCone, ConeKind, ConeOptions, TangentVector,
};
pub use world::{world_function_riemann, RiemannWorldFunction};
