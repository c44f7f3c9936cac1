//! Write the built-in assemblies as scene files into a directory.
//!
//! ```text
//! cargo run -p geomink --example write_scenes -- data/
//! ```

use std::path::PathBuf;

use geomink::io::format_scene;
use geomink::scenes;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, a) in [
        ("split_star.asm", scenes::split_star()),
        ("hollow_box.asm", scenes::hollow_box()),
        ("peg_in_hole.asm", scenes::peg_in_hole()),
        ("separated_cubes.asm", scenes::separated_cubes(1)),
    ] {
        std::fs::write(dir.join(name), format_scene(&a))?;
    }
    Ok(())
}
