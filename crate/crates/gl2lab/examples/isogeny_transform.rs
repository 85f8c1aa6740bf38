// The isogeny image transform.
//
// Starting from the full lift of `<[[1,0],[1,1]]>` modulo 2 (the curves
// with a rational 2-torsion point), applies a 2-isogeny along the stable
// kernel, shows the Borel conjugator and the transformed generators, and
// checks that determinants and `-Id` survive and that odd-degree steps
// change nothing.
//
// ```bash
// cargo run --release --example isogeny_transform
// ```

use gl2lab::groups::{full_lift, generate, stable_cyclic_subgroups, SubgroupSpec};
use gl2lab::invariants::label_invariants;
use gl2lab::isogeny::{isogeny_image, isogeny_image_detailed, IsogenyStep};

/// Labels of the source and image, and whether the laws held.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    /// `N.i.g` of the source.
    pub source_label: String,
    /// `N.i.g` of the image of each stable order-2 kernel.
    pub image_labels: Vec<String>,
    /// Determinants preserved generator by generator.
    pub determinants_preserved: bool,
    /// An odd-degree step returned the source unchanged.
    pub odd_step_is_identity: bool,
}

/// Runs the transform and prints the intermediate data.
pub fn run_example() -> gl2lab::Result<Outcome> {
    let g = full_lift(&generate(&SubgroupSpec::from_rows(2, &[[[1, 0], [1, 1]]])?)?, 5)?;
    let source_label = label_invariants(&g)?.label();
    println!("source: order {}, label {source_label}", g.order());
    let mut image_labels = Vec::new();
    let mut determinants_preserved = true;
    for kernel in stable_cyclic_subgroups(&g, 1)? {
        let detail = isogeny_image_detailed(&g, &IsogenyStep::from_kernel(kernel))?;
        println!("kernel {kernel:?}: conjugator {:?}", detail.conjugator.rows());
        for t in &detail.generators {
            let ok = t.source_det_mod_32() == t.image.det();
            determinants_preserved &= ok;
            println!("  {:?} -> {:?} (kernel generator: {}, det ok: {ok})", t.source, t.image.rows(), t.from_kernel);
        }
        let label = label_invariants(&detail.image)?.label();
        println!("  image: order {}, -Id {}, label {label}", detail.image.order(), detail.image.contains_minus_id());
        image_labels.push(label);
    }
    let odd = isogeny_image(&g, &IsogenyStep::odd(3)?)?;
    let odd_step_is_identity = odd.same_elements(&g);
    println!("3-isogeny leaves the image unchanged: {odd_step_is_identity}");
    Ok(Outcome { source_label, image_labels, determinants_preserved, odd_step_is_identity })
}

fn main() -> gl2lab::Result<()> {
    run_example().map(|_| ())
}
