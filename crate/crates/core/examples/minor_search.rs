//! Minor containment with branch-set models and the small forbidden-minor
//! catalogs.
use superstab::minors::{catalog, contains_any, has_minor, CatalogLevel};
use superstab::Multigraph;

fn main() -> superstab::Result<()> {
    let k4 = Multigraph::complete(4);
    for (name, g) in [("Q_3", Multigraph::cube()), ("C_8", Multigraph::cycle(8)), ("Petersen", Multigraph::petersen())] {
        match has_minor(&g, &k4) {
            Some(m) => println!("{name} has a K_4 minor, branch sets {:?}", m.branch_sets),
            None => println!("{name} has no K_4 minor"),
        }
    }
    for level in [CatalogLevel::LambdaLe1, CatalogLevel::LambdaLe2] {
        let cat = catalog(level)?;
        let hit = contains_any(&Multigraph::octahedron(), &cat);
        println!("K_{{2,2,2}} vs {}: {:?}", level.file_name(), hit.map(|(i, _)| i));
    }
    Ok(())
}
