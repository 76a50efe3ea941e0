//! Resonance algebra, conserved quantities, estimate probes, and the
//! difference-energy monitor.

pub mod conservation;
pub mod energy;
pub mod probes;
pub mod resonance;

pub use conservation::{conservation_drift, conserved_quantities, ConservedQuantities, DriftReport};
pub use energy::{difference_energy_monitor, EnergyMonitor};
pub use probes::{
    bilinear_ratio_probe, linear_estimate_probe, BilinearEstimate, LinearEstimate, ProbeConfig,
    ProbeStats,
};
pub use resonance::{
    region_classify, resonance_identity_residual, resonance_roots, Region, ResonanceIdentity,
    ResonanceRoots,
};
