//! FMCW scene simulator: chirp configuration, scene description, baseband
//! I/Q synthesis, and the raw binary capture format.

mod config;
mod raw;
mod scene;
mod synth;

pub use config::ChirpConfig;
pub use raw::{read_raw, write_raw};
pub use scene::{Motion, NoiseSpec, Scatterer, SceneFile, SceneSpec};
pub use synth::{beat_frequency, phase_from_displacement, synthesize_cube, IqCube};
