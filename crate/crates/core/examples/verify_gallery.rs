//! Build every gallery entry and print its certificate summary.
use superstab::construct::{gallery, GalleryName};

fn main() -> superstab::Result<()> {
    let names = [
        "star(4)",
        "cycle(3)",
        "cycle(7)",
        "complete(4)",
        "complete(6)",
        "complete_multi(2)",
        "complete_multi(5)",
        "k4_square",
        "prism",
        "dihedral_star",
    ];
    for s in names {
        let name: GalleryName = s.parse()?;
        let c = gallery(&name)?;
        let r = c.report();
        println!(
            "{s:18} n={:2} m={:2} d={} nullity={:2} {:?} min_eig={:+.3e}",
            c.tensegrity.n(),
            c.tensegrity.graph().edge_count(),
            r.d,
            r.nullity,
            r.verdict,
            r.min_eigenvalues.first().copied().unwrap_or(0.0),
        );
    }
    Ok(())
}
