//! Translate random diagrams into graphs and back, and watch composition turn into substitution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wirecat::graphs::{is_isomorphic_strict, substitute};
use wirecat::random::{self, DiagramShape};
use wirecat::translate::{graph_to_wd, wd_to_graph};
use wirecat::wiring::compose;

fn main() -> Result<(), wirecat::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shape = DiagramShape::default();

    let d = random::diagram_with_boxes(&mut rng, shape, 2);
    let g = wd_to_graph(&d);
    println!("diagram: {}", d.to_json());
    println!(
        "graph: {} vertices, {} edges, {} free edges, {} loops",
        g.vertex_count(),
        g.edges().len(),
        g.free_edges().len(),
        g.loop_count()
    );
    assert_eq!(graph_to_wd(&g), d);
    println!("back to a diagram: identical");

    let mut agree = 0;
    for _ in 0..100 {
        let d = random::diagram_with_boxes(&mut rng, shape, 1);
        let i = rng.gen_range(1..=d.input_count());
        let d2 = random::diagram_with_output(&mut rng, shape, d.inputs()[i - 1].flipped(), 0);
        let via_wd = wd_to_graph(&compose(&d, i, &d2)?);
        let via_graph = substitute(&wd_to_graph(&d), i - 1, &wd_to_graph(&d2))?;
        agree += is_isomorphic_strict(&via_wd, &via_graph) as usize;
    }
    println!("composition matches substitution in {agree}/100 random cases");
    Ok(())
}
