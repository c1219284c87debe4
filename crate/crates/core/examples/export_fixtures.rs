//! Write the built-in fixture groups as group files:
//! `cargo run -p ncgalois-core --example export_fixtures -- <dir>`.

use std::path::PathBuf;

use ncgalois::fixtures;
use ncgalois::io::GroupFile;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures/groups".into()));
    std::fs::create_dir_all(&dir).expect("create output directory");
    for fx in fixtures::all() {
        let text = serde_json::to_string(&GroupFile::from_group(&fx.group)).expect("serialise group");
        std::fs::write(dir.join(format!("{}.json", fx.name)), text + "\n").expect("write group file");
    }
}
