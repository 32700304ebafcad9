//! Stage 4: uniform target lattice, dense displacement field and bicubic
//! backward remapping.

mod field;
mod kernel;
mod sample;

pub use field::{build_displacement_field, make_uniform_grid, DisplacementField, FieldEvaluator, UniformGrid};
pub use kernel::catmull_rom_weights;
pub use sample::{bicubic_sample, remap_image, remap_rows, resize_bicubic};
