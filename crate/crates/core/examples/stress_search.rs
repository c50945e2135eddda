//! Recover a certifying stress for a bare framework by random search.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superstab::certify::{search_stress, verify_super_stable};
use superstab::construct::{gallery, GalleryName};

fn main() -> superstab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in [GalleryName::Complete(4), GalleryName::K4Square, GalleryName::Prism] {
        let t = gallery(&name)?.tensegrity;
        match search_stress(&t, 1e-8, 4000, &mut rng) {
            Some(w) => {
                let c = verify_super_stable(&t, &w, 1e-8);
                let shown: Vec<String> = w.omega.iter().map(|x| format!("{x:+.3}")).collect();
                println!("{name}: {:?} with omega = [{}]", c.verdict, shown.join(", "));
            }
            None => println!("{name}: no stress found"),
        }
    }
    Ok(())
}
