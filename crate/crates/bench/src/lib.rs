pub use leafvib_core as core_crate;
