pub mod probes;
pub mod resonance;
pub mod solve;
pub mod study;
