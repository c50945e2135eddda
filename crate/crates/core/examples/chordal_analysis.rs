//! Exact λ and rd on chordal multigraphs from the clique structure.
use superstab::params::chordal_analysis;
use superstab::Multigraph;

fn main() -> superstab::Result<()> {
    // Two triangles sharing the edge 1-2, then the same with 0-1 doubled.
    let fan = Multigraph::new(4, vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])?;
    let mut doubled = fan.clone();
    doubled.push_edge(0, 1)?;
    let graphs = [
        ("K_4", Multigraph::complete(4)),
        ("K_4^=", Multigraph::complete(4).double()),
        ("two triangles", fan),
        ("two triangles, 0-1 doubled", doubled),
        ("path", Multigraph::path(5)),
        ("C_4", Multigraph::cycle(4)),
    ];
    for (name, g) in graphs {
        match chordal_analysis(&g) {
            Some(a) => println!(
                "{name:28} tw={} criterion={:5} rd={} lambda={} bags={:?}",
                a.tw, a.criterion_met, a.rd_exact, a.lambda_exact, a.clique_tree.bags
            ),
            None => println!("{name:28} not chordal"),
        }
    }
    Ok(())
}
