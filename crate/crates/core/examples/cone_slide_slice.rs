//! Cone a planar certificate, slide its points along the rays through the
//! apex, then slice with a tilted plane.
use superstab::construct::{cone_certificate, gallery, lift_adjacency, slice, slide, GalleryName, Hyperplane};
use superstab::symmat::SymMatrix;
use superstab::Multigraph;

fn main() -> superstab::Result<()> {
    let base = gallery(&GalleryName::K4Square)?;
    let cc = cone_certificate(&base)?;
    println!("cone: n={} d={} {:?}", cc.certificate.tensegrity.n(), cc.certificate.d, cc.certificate.verdict);

    // A negative scale sends a point through the apex and flips its edge signs.
    let slid = slide(&cc, &[1.0, 2.0, -0.5, 1.5])?;
    println!("slide: sigma {:?} {:?}", slid.certificate.tensegrity.sigma(), slid.certificate.verdict);

    let h = Hyperplane { normal: vec![0.3, -0.2, 1.0], offset: 2.0 };
    let cut = slice(&cc, &h)?;
    println!("slice: d={} {:?}", cut.d, cut.verdict);

    // Any PSD matrix with the right support lifts to a coned certificate.
    let g = Multigraph::cycle(4);
    let a = SymMatrix::new(nalgebra::DMatrix::from_row_slice(
        4,
        4,
        &[2.0, -1.0, 0.0, -1.0, -1.0, 2.0, -1.0, 0.0, 0.0, -1.0, 2.0, -1.0, -1.0, 0.0, -1.0, 2.0],
    ))?;
    let lifted = lift_adjacency(&g, &a)?;
    println!("lift: d={} {:?}", lifted.certificate.d, lifted.certificate.verdict);
    Ok(())
}
