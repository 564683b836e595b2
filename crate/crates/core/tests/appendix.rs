mod common;

use common::{check_fragment, component_graph, fragment_exps};
use extremal::torep::section5_component;

#[test]
fn displayed_fragments_match_generated_crystals() {
    for s in 0..2 {
        let c = check_fragment(s);
        assert!(c.missing_nodes.is_empty(), "s={s} missing {:?}", c.missing_nodes);
        assert!(c.wrong_edges.is_empty(), "s={s} wrong {:?}", c.wrong_edges);
        assert!(c.extra_edges.is_empty(), "s={s} extra {:?}", c.extra_edges);
        assert!(c.dangling.is_empty(), "s={s} dangling {:?}", c.dangling);
    }
}

#[test]
fn fragment_nodes_lie_in_their_component() {
    for s in 0..2 {
        let g = component_graph(s);
        for e in fragment_exps(s) {
            let k = g.find_exps(&e).unwrap();
            assert_eq!(section5_component(g.node(k)), Some(s));
        }
    }
}
