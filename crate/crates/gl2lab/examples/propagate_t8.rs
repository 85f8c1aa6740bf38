// Reproduces a `T_8` isogeny-torsion graph from one 2-adic image.
//
// The root is the transpose of `H_193n` (catalog generators act on row
// vectors), lifted to modulus 32. Propagation finds all stable cyclic
// 2-power subgroups, transforms the image along each, and reads the
// torsion of every vertex from fixed vectors. Vertex images are matched
// against the embedded catalog and the duality round trip is checked.
//
// ```bash
// cargo run --release --example propagate_t8
// ```

use gl2lab::catalog::{annotate_graph, builtin_catalog, lookup};
use gl2lab::groups::{full_lift, transpose_group};
use gl2lab::isogeny::{propagate_graph, IsogenyGraph, OddPart};

/// Builds, annotates and prints the graph.
pub fn run_example() -> gl2lab::Result<IsogenyGraph> {
    let root = full_lift(&transpose_group(lookup("H_193n")?.closure()?), 5)?;
    let mut graph = propagate_graph(&root, &OddPart::none())?;
    annotate_graph(&mut graph, &builtin_catalog())?;
    println!("shape {} with {} vertices, uniform index {:?}", graph.shape, graph.vertices.len(), graph.uniform_index());
    for v in &graph.vertices {
        println!(
            "  E{}: kernel {:?}, torsion {}, level {}, index {}, labels {:?}",
            v.id + 1,
            v.kernel,
            v.torsion,
            v.level,
            v.index,
            v.labels
        );
    }
    for e in &graph.edges {
        println!("  E{} -- E{} (degree {})", e.from + 1, e.to + 1, e.degree);
    }
    println!("duality failures: {}", graph.duality_failures()?.len());
    Ok(graph)
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
