#![allow(dead_code)]

pub mod synth;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dewarp::io::{write_image, write_mask};
use dewarp::OutputFormat;

/// Writes `<name>.png` and `<name>_mask.png` for a scene.
pub fn write_scene(dir: &Path, name: &str, scene: &synth::Scene) -> (PathBuf, PathBuf) {
    let image = dir.join(format!("{name}.png"));
    let mask = dir.join(format!("{name}_mask.png"));
    write_image(&image, &scene.warped, OutputFormat::Png).unwrap();
    write_mask(&mask, &scene.mask).unwrap();
    (image, mask)
}

/// Runs the `dewarp` binary.
pub fn dewarp<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_dewarp")).args(args).env_remove("DEWARP_WORKERS").output().unwrap()
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}
