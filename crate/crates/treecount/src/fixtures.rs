//! Embedded test graphs, available to the CLI `verify` command and tests
//! without external data.

use crate::graph::RegularGraph;

pub const K4: &str = "\
# complete graph on 4 vertices (q = 2)
0 1
0 2
0 3
1 2
1 3
2 3
";

pub const K5: &str = "\
# complete graph on 5 vertices (q = 3)
0 1
0 2
0 3
0 4
1 2
1 3
1 4
2 3
2 4
3 4
";

pub const PETERSEN: &str = "\
# Petersen graph (q = 2): outer 5-cycle, spokes, inner pentagram
0 1
1 2
2 3
3 4
0 4
0 5
1 6
2 7
3 8
4 9
5 7
7 9
6 9
6 8
5 8
";

pub const K33: &str = "\
# complete bipartite graph K_{3,3} (q = 2, bipartite)
0 3
0 4
0 5
1 3
1 4
1 5
2 3
2 4
2 5
";

pub fn k4() -> RegularGraph {
    RegularGraph::parse(K4).expect("K4 fixture is valid")
}

pub fn k5() -> RegularGraph {
    RegularGraph::parse(K5).expect("K5 fixture is valid")
}

pub fn petersen() -> RegularGraph {
    RegularGraph::parse(PETERSEN).expect("Petersen fixture is valid")
}

pub fn k33() -> RegularGraph {
    RegularGraph::parse(K33).expect("K33 fixture is valid")
}

/// Resolves `--graph` arguments: a built-in fixture name or a file path.
pub fn by_name(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "k4" => Some(K4),
        "k5" => Some(K5),
        "petersen" => Some(PETERSEN),
        "k33" | "k3,3" => Some(K33),
        _ => None,
    }
}
