//! Write and read DMX1 design files, CSV input, labels and SIM1 similarities.

use spectral_appraise::classic::{build_similarity, Kernel, SparseSimilarity};
use spectral_appraise::io::{load_design, parse_csv, parse_labels, save_design, Dtype};

fn main() -> spectral_appraise::Result<()> {
    let dir = std::env::temp_dir().join("spectral-appraise-example");
    std::fs::create_dir_all(&dir)?;

    let design = parse_csv("a,b,c\n1,0,0.5\n0,1,0.25\n0.5,0.5,1\n")?;
    for (dtype, name) in [(Dtype::F64, "toy64.dmx"), (Dtype::F32, "toy32.dmx")] {
        let path = dir.join(name);
        save_design(&path, &design, dtype)?;
        let back = load_design(&path)?;
        println!(
            "{name}: {} bytes, exact round trip: {}",
            std::fs::metadata(&path)?.len(),
            back == design
        );
    }

    let labels = parse_labels("0\n1\n1\n", Some(design.rows()))?;
    println!("labels {labels:?}");

    let sim = build_similarity(&design, Kernel::Cosine, 2)?;
    let mut buf = Vec::new();
    sim.write_sim1(&mut buf)?;
    let back = SparseSimilarity::read_sim1(buf.as_slice())?;
    println!(
        "SIM1: {} bytes, {} entries, round trip: {}",
        buf.len(),
        back.nnz(),
        back == sim
    );
    Ok(())
}
