/// Strongly connected components of a multigraph on `n` nodes given as
/// `(tail, head)` pairs. Returns a component label per node; labels are
/// assigned in reverse topological order of the condensation.
pub(crate) fn components(n: usize, arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in arcs {
        adj[u].push(v);
    }
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // explicit DFS frames: (node, next child position)
        let mut frames = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = frames.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Nodes lying on at least one directed cycle (non-trivial component or self-loop).
pub(crate) fn on_cycle(n: usize, arcs: &[(usize, usize)]) -> Vec<bool> {
    let comp = components(n, arcs);
    let mut size = vec![0usize; n];
    for &c in &comp {
        size[c] += 1;
    }
    let mut res: Vec<bool> = comp.iter().map(|&c| size[c] > 1).collect();
    for &(u, v) in arcs {
        if u == v {
            res[u] = true;
        }
    }
    res
}
