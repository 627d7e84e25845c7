pub mod error;
pub mod exact;
pub mod group;
pub mod poly;
pub mod rational_fn;
pub mod motion;
pub mod quadric;
pub mod tangent;
pub mod char_curve;
pub mod envelope;
pub mod trimming;
pub mod presets;
pub mod scene;
pub mod cli;
