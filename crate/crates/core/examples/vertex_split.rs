//! Split a vertex of the prism into two joined by a new bridge edge.
use superstab::construct::{gallery, split_vertex_certificate, ConstructOptions, GalleryName, SplitSpec};

fn main() -> superstab::Result<()> {
    let c = gallery(&GalleryName::Prism)?;
    let inc = c.tensegrity.graph().incident_edges(0);
    let spec = SplitSpec { vertex: 0, block0: inc[..2].to_vec() };
    let out = split_vertex_certificate(&c, &spec, &ConstructOptions::default(), true)?;
    println!(
        "split vertex 0 (edges {:?}) at eps={:.0e}: new vertices {} and {}, bridge edge {} with stress {:+.4}",
        spec.block0,
        out.eps,
        out.v0,
        out.v1,
        out.bridge,
        out.certificate.stress.omega[out.bridge]
    );
    println!("d={} nullity={} {:?}", out.certificate.d, out.certificate.nullity, out.certificate.verdict);
    Ok(())
}
