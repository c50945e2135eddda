//! Realize a graph from a certificate of one of its minors.
use superstab::construct::{gallery, realize_from_minor, ConstructOptions, GalleryName};
use superstab::Multigraph;

fn main() -> superstab::Result<()> {
    let mut wheel: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    wheel.extend((0..5).map(|i| (i, 5)));
    let cases = [
        ("W_5 from K_4", Multigraph::new(6, wheel)?, GalleryName::Complete(4)),
        ("Q_3 from K_4", Multigraph::cube(), GalleryName::Complete(4)),
        ("K_4^= from K_3^=", Multigraph::complete(4).double(), GalleryName::CompleteMulti(3)),
    ];
    let opts = ConstructOptions::default();
    for (label, g, minor) in cases {
        let out = realize_from_minor(&g, &gallery(&minor)?, &opts)?;
        println!("{label}: n={} d={} injective={} {:?}", out.tensegrity.n(), out.d, out.tensegrity.is_injective(1e-9), out.verdict);
    }
    Ok(())
}
