//! Integer potentials on a graph: find `ω` with `ω[c] − ω[r] = u` on every edge.

use std::collections::VecDeque;

/// Edge `(c, r, u)` demands `ω[c] − ω[r] = u`. Returns one solution per node
/// (the first node of each connected component gets the zero vector), or `None`
/// when the constraints are inconsistent.
pub fn solve_potentials(nodes: usize, dim: usize, edges: &[(usize, usize, Vec<i32>)]) -> Option<Vec<Vec<i32>>> {
    let mut adj: Vec<Vec<(usize, Vec<i32>)>> = vec![Vec::new(); nodes];
    for (c, r, u) in edges {
        adj[*c].push((*r, u.iter().map(|x| -x).collect()));
        adj[*r].push((*c, u.clone()));
    }
    let mut omega: Vec<Option<Vec<i32>>> = vec![None; nodes];
    for root in 0..nodes {
        if omega[root].is_some() {
            continue;
        }
        omega[root] = Some(vec![0; dim]);
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            let wa = omega[a].clone().unwrap();
            for (b, shift) in &adj[a] {
                // edge stored at a: ω[b] = ω[a] + shift
                let want: Vec<i32> = wa.iter().zip(shift).map(|(x, s)| x + s).collect();
                match &omega[*b] {
                    Some(wb) if *wb != want => return None,
                    Some(_) => {}
                    None => {
                        omega[*b] = Some(want);
                        queue.push_back(*b);
                    }
                }
            }
        }
    }
    Some(omega.into_iter().map(|w| w.unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistent_triangle() {
        let e = vec![(0, 1, vec![2]), (1, 2, vec![3]), (0, 2, vec![5])];
        let w = solve_potentials(3, 1, &e).unwrap();
        for (c, r, u) in &e {
            assert_eq!(w[*c][0] - w[*r][0], u[0]);
        }
    }

    #[test]
    fn inconsistent_cycle() {
        let e = vec![(0, 1, vec![1]), (1, 0, vec![1])];
        assert!(solve_potentials(2, 1, &e).is_none());
    }
}
