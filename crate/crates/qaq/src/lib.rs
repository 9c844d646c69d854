//! Image decoding, model persistence and command implementations on top of
//! [`qaq_core`].

pub mod commands;
pub mod error;
pub mod io;
pub mod model_file;

pub use error::{Error, Result};
pub use io::{load_image, save_pgm};
pub use model_file::{load_model, save_model};
