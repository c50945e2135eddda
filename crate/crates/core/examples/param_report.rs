//! Bounds on λ and rd for a few familiar graphs, with their witnesses.
use superstab::params::{param_report, Witness};
use superstab::Multigraph;

fn describe(w: &Witness) -> String {
    match w {
        Witness::Minor { minor, .. } => format!("minor {minor}"),
        Witness::Decomposition { lacking, td, .. } => format!("width {} decomposition, lacking={lacking}", td.width()),
        Witness::CatalogMiss { catalog, .. } => format!("no minor from {catalog}"),
        Witness::Structure { reason, .. } => reason.clone(),
    }
}

fn main() -> superstab::Result<()> {
    let graphs = [
        ("C_6", Multigraph::cycle(6)),
        ("K_5", Multigraph::complete(5)),
        ("K_4^=", Multigraph::complete(4).double()),
        ("Q_3", Multigraph::cube()),
        ("K_{2,2,2}", Multigraph::octahedron()),
        ("Petersen", Multigraph::petersen()),
    ];
    for (name, g) in graphs {
        let r = param_report(&g)?;
        println!(
            "{name:10} lambda in [{}, {}]  rd in [{}, {}]  tw={} omega={}",
            r.lambda.lower, r.lambda.upper, r.rd.lower, r.rd.upper, r.treewidth, r.clique_number
        );
        println!("{:10} lower: {}; upper: {}", "", describe(&r.lambda.lower_witness), describe(&r.lambda.upper_witness));
    }
    Ok(())
}
