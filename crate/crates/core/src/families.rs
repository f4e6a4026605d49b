//! Deterministic graph families, including the generators behind the
//! `queen*` and `myciel*` DIMACS benchmark instances.

use alloc::format;

use crate::graph::Graph;

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
}

/// Queen graph on a `rows x cols` board: squares are adjacent when they
/// share a row, column or diagonal. Square `(r, c)` is vertex `r * cols + c`.
pub fn queen(rows: usize, cols: usize) -> Graph {
    let n = rows * cols;
    let mut g = Graph::new(n);
    for a in 0..n {
        let (ra, ca) = ((a / cols) as isize, (a % cols) as isize);
        for b in a + 1..n {
            let (rb, cb) = ((b / cols) as isize, (b % cols) as isize);
            if ra == rb || ca == cb || (ra - rb).abs() == (ca - cb).abs() {
                g.add_edge(a, b).expect("in range");
            }
        }
    }
    g.with_name(format!("queen{rows}_{cols}"))
}

/// Mycielskian of `g`: vertices `0..n` copy `g`, `n..2n` are the shadows
/// `u'` (adjacent to the neighbours of `u`), and `2n` is joined to every shadow.
pub fn mycielskian(g: &Graph) -> Graph {
    let n = g.n();
    let mut h = Graph::new(2 * n + 1);
    for (u, v) in g.edges() {
        h.add_edge(u, v).unwrap();
        h.add_edge(u, n + v).unwrap();
        h.add_edge(v, n + u).unwrap();
    }
    for u in 0..n {
        h.add_edge(n + u, 2 * n).unwrap();
    }
    h
}

/// DIMACS `myciel<i>`: `i - 1` Mycielskians applied to `K2`, so the
/// chromatic number is `i + 1`. `myciel(3)` is the Grötzsch graph.
pub fn myciel(i: usize) -> Graph {
    assert!(i >= 1);
    let mut g = Graph::complete(2);
    for _ in 1..i {
        g = mycielskian(&g);
    }
    g.with_name(format!("myciel{i}"))
}

/// Resolves names like `queen6_6`, `myciel3`, `K5`, `C5`, `P3`.
pub fn by_name(name: &str) -> Option<Graph> {
    let num = |s: &str| s.parse::<usize>().ok();
    let g = if let Some(rest) = name.strip_prefix("queen") {
        let (r, c) = rest.split_once('_')?;
        let (r, c) = (num(r)?, num(c)?);
        if r == 0 || c == 0 {
            return None;
        }
        queen(r, c)
    } else if let Some(rest) = name.strip_prefix("myciel") {
        let i = num(rest)?;
        if i == 0 || i > 8 {
            return None;
        }
        myciel(i)
    } else if let Some(rest) = name.strip_prefix('K') {
        Graph::complete(num(rest)?)
    } else if let Some(rest) = name.strip_prefix('C') {
        let n = num(rest)?;
        if n < 3 {
            return None;
        }
        cycle(n)
    } else {
        path(num(name.strip_prefix('P')?)?)
    };
    Some(if g.name().is_some() { g } else { g.with_name(name) })
}
