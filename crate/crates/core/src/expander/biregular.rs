use super::graph::BipartiteGraph;
use super::{GraphError, Result};

/// Splits every right vertex of degree above `r` into `ceil(deg/r)` vertices.
///
/// Incident edges are taken in increasing left order, full blocks of `r`
/// first. The blocks of right vertex `v` get consecutive ids, in the
/// original order of `v`, so unsplit vertices keep their relative order.
pub fn split_right_vertices(g: &BipartiteGraph, r: usize) -> Result<BipartiteGraph> {
    if r == 0 {
        return Err(GraphError::Precondition("right degree r must be >= 1".into()));
    }
    let mut blocks: Vec<&[u32]> = Vec::new();
    let right = g.right_adjacency();
    for lefts in &right {
        if lefts.len() <= r {
            blocks.push(lefts);
        } else {
            blocks.extend(lefts.chunks(r));
        }
    }
    let mut adjacency = vec![Vec::new(); g.n()];
    for (v, lefts) in blocks.iter().enumerate() {
        for &u in lefts.iter() {
            adjacency[u as usize].push(v as u32);
        }
    }
    BipartiteGraph::new(blocks.len(), adjacency)
}

/// Turns a `d0`-left-regular graph on `m0` right vertices into a
/// `(d, r)`-biregular graph on `m` right vertices.
///
/// Over-full right vertices are split, isolated right vertices are appended
/// up to `m`, then open slots are filled: left vertices are visited in order
/// `d - d0` times, each visit attaching one edge to the lowest-index right
/// vertex that still has room and is not already a neighbor. Splitting and
/// adding edges never shrink a neighborhood, so expansion is preserved.
pub fn biregularize(g: &BipartiteGraph, m: usize, d: usize, r: usize) -> Result<BipartiteGraph> {
    let n = g.n();
    let m0 = g.m();
    let d0 = g
        .left_degree()
        .ok_or_else(|| GraphError::Precondition("input graph must be left-regular".into()))?;
    if !(d0 < d && d <= m0) {
        return Err(GraphError::Precondition(format!("need d0 < d <= m0 (d0={d0}, d={d}, m0={m0})")));
    }
    if n * d != m * r {
        return Err(GraphError::Precondition(format!("n*d = {} != m*r = {}", n * d, m * r)));
    }
    if m * (d - d0) < m0 * d {
        return Err(GraphError::Precondition(format!(
            "m={m} below m0*d/(d-d0) = {m0}*{d}/{}",
            d - d0
        )));
    }

    let split = split_right_vertices(g, r)?;
    if split.m() > m {
        return Err(GraphError::Infeasible(format!("splitting produced {} > m={m} right vertices", split.m())));
    }
    let mut adjacency: Vec<Vec<u32>> = split.adjacency().to_vec();
    let mut load = split.right_degrees();
    load.resize(m, 0);

    let mut cursor = 0usize;
    for _ in 0..d - d0 {
        for (u, list) in adjacency.iter_mut().enumerate() {
            while cursor < m && load[cursor] >= r {
                cursor += 1;
            }
            let target = (cursor..m)
                .find(|&v| load[v] < r && list.binary_search(&(v as u32)).is_err())
                .ok_or_else(|| {
                    GraphError::Infeasible(format!("no open right slot avoids a duplicate edge for left vertex {u}"))
                })?;
            let pos = list.binary_search(&(target as u32)).unwrap_err();
            list.insert(pos, target as u32);
            load[target] += 1;
        }
    }
    let out = BipartiteGraph::new(m, adjacency)?;
    debug_assert!(out.is_biregular(d, r));
    if !out.is_biregular(d, r) {
        return Err(GraphError::Infeasible("fill did not reach exact biregularity".into()));
    }
    Ok(out)
}
