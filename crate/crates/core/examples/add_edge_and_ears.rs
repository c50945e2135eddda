//! Grow a certificate by adding an edge, subdividing a cable and attaching
//! an ear through two new vertices.
use superstab::construct::{add_edge, attach_ear, gallery, subdivide_cable, ConstructOptions, GalleryName};

fn main() -> superstab::Result<()> {
    let c4 = gallery(&GalleryName::Cycle(4))?;
    let chord = add_edge(&c4, 0, 2)?;
    println!("chord 0-2: d={} nullity={} {:?}", chord.d, chord.nullity, chord.verdict);

    let cable = (0..chord.stress.omega.len()).find(|&e| chord.stress.omega[e] > 0.0).unwrap();
    let sub = subdivide_cable(&chord, cable)?;
    println!("subdivide edge {cable}: n={} {:?}", sub.tensegrity.n(), sub.verdict);

    let n = sub.tensegrity.n();
    let ear = attach_ear(&sub, &[1, n, n + 1, 3], &ConstructOptions::default())?;
    println!(
        "ear 1-{n}-{}-3: n={} m={} d={} {:?}",
        n + 1,
        ear.tensegrity.n(),
        ear.tensegrity.graph().edge_count(),
        ear.d,
        ear.verdict
    );
    Ok(())
}
