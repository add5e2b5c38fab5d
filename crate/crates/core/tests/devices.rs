use bellmark_core::devices::presets;
use bellmark_core::{longest_simple_path, PathSearch};

fn is_simple_path(g: &bellmark_core::ConnectivityGraph, p: &[usize]) -> bool {
    let mut seen = vec![false; g.n_vertices()];
    p.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

#[test]
fn longest_paths_on_presets() {
    for d in presets() {
        let r = longest_simple_path(&d.graph, &PathSearch::multiple(3)).unwrap();
        println!(
            "{}: {} (found {}, exact {})",
            d.name,
            r.path.len(),
            r.longest_found,
            r.exact
        );
        assert!(is_simple_path(&d.graph, &r.path));
        assert_eq!(r.path.len() % 3, 0);
        let want = match d.name.as_str() {
            "star-5" | "falcon-7" => 3,
            "ion-trap-20" => 18,
            "sycamore-53" => 48,
            "eagle-127" => 105,
            _ => unreachable!(),
        };
        assert!(r.path.len() >= want, "{}: {}", d.name, r.path.len());
    }
}
