//! The simplicial set `[X/G]` with `[X/G]_k = X × G^k` and its front/back faces.
//!
//! A cell is stored as `[x, g_1, …, g_k]`.

use crate::error::{Error, Result};

/// Finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl Group {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|v| *v >= n)) {
            return Err(Error::InvalidAction("multiplication table is not square".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidAction("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidAction(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity)
                .ok_or_else(|| Error::InvalidAction(format!("element {g} has no inverse")))?;
            inverses.push(inv);
        }
        Ok(Group { table, identity, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Group::from_table(table).expect("cyclic group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn product(&self, gs: &[usize]) -> usize {
        gs.iter().fold(self.identity, |acc, g| self.mul(acc, *g))
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// Right action of a finite group on `0..carrier`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: Group,
    act: Vec<Vec<usize>>,
}

impl GroupAction {
    /// `act[x][g] = x·g`.
    pub fn new(group: Group, act: Vec<Vec<usize>>) -> Result<Self> {
        let nx = act.len();
        let ng = group.order();
        if act.iter().any(|r| r.len() != ng || r.iter().any(|y| *y >= nx)) {
            return Err(Error::InvalidAction("action table has the wrong shape".into()));
        }
        for x in 0..nx {
            if act[x][group.identity()] != x {
                return Err(Error::InvalidAction(format!("x·e ≠ x for x = {x}")));
            }
            for g in 0..ng {
                for h in 0..ng {
                    if act[act[x][g]][h] != act[x][group.mul(g, h)] {
                        return Err(Error::InvalidAction(format!("(x·g)·h ≠ x·(gh) at ({x},{g},{h})")));
                    }
                }
            }
        }
        Ok(GroupAction { group, act })
    }

    pub fn trivial(group: Group, carrier: usize) -> Self {
        let act = (0..carrier).map(|x| vec![x; group.order()]).collect();
        GroupAction::new(group, act).expect("trivial action")
    }

    /// `G` acting on itself by right multiplication.
    pub fn regular(group: Group) -> Self {
        let act = (0..group.order()).map(|x| (0..group.order()).map(|g| group.mul(x, g)).collect()).collect();
        GroupAction::new(group, act).expect("regular action")
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn carrier(&self) -> usize {
        self.act.len()
    }

    pub fn act(&self, x: usize, g: usize) -> usize {
        self.act[x][g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.act
    }

    /// All cells of `X × G^k`, lexicographic.
    pub fn level(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.carrier()).map(|x| vec![x]).collect();
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..self.group.order()).map(move |g| {
                        let mut d = c.clone();
                        d.push(g);
                        d
                    })
                })
                .collect();
        }
        out
    }

    fn check_cell(&self, cell: &[usize]) -> Result<usize> {
        if cell.is_empty() || cell[0] >= self.carrier() || cell[1..].iter().any(|g| *g >= self.group.order()) {
            return Err(Error::OutOfRange(format!("{cell:?} is not a cell")));
        }
        Ok(cell.len() - 1)
    }

    /// `∂_i`: `i = 0` acts on `x`, `0 < i < k` merges `g_i g_{i+1}`, `i = k` drops `g_k`.
    pub fn face(&self, cell: &[usize], i: usize) -> Result<Vec<usize>> {
        let k = self.check_cell(cell)?;
        if k == 0 || i > k {
            return Err(Error::OutOfRange(format!("face {i} of a level-{k} cell")));
        }
        let mut out = Vec::with_capacity(k);
        if i == 0 {
            out.push(self.act(cell[0], cell[1]));
            out.extend_from_slice(&cell[2..]);
        } else if i == k {
            out.extend_from_slice(&cell[..k]);
        } else {
            out.extend_from_slice(&cell[..i]);
            out.push(self.group.mul(cell[i], cell[i + 1]));
            out.extend_from_slice(&cell[i + 2..]);
        }
        Ok(out)
    }

    /// `s_i` inserts `e` in position `i + 1`.
    pub fn degeneracy(&self, cell: &[usize], i: usize) -> Result<Vec<usize>> {
        let k = self.check_cell(cell)?;
        if i > k {
            return Err(Error::OutOfRange(format!("degeneracy {i} of a level-{k} cell")));
        }
        let mut out = cell.to_vec();
        out.insert(i + 1, self.group.identity());
        Ok(out)
    }

    /// Front face `ρ_{k,p}`: keeps `(x, g_1, …, g_p)`.
    pub fn front(&self, cell: &[usize], p: usize) -> Result<Vec<usize>> {
        let k = self.check_cell(cell)?;
        if p > k {
            return Err(Error::OutOfRange(format!("front face {p} of a level-{k} cell")));
        }
        Ok(cell[..=p].to_vec())
    }

    /// Back face `τ_{k,p}`: `(x·g_1⋯g_{k−p}, g_{k−p+1}, …, g_k)`.
    pub fn back(&self, cell: &[usize], p: usize) -> Result<Vec<usize>> {
        let k = self.check_cell(cell)?;
        if p > k {
            return Err(Error::OutOfRange(format!("back face {p} of a level-{k} cell")));
        }
        let x = self.act(cell[0], self.group.product(&cell[1..=k - p]));
        let mut out = vec![x];
        out.extend_from_slice(&cell[k - p + 1..]);
        Ok(out)
    }

    /// Vertex `j` of a cell: `x·g_1⋯g_j`.
    pub fn vertex(&self, cell: &[usize], j: usize) -> usize {
        self.act(cell[0], self.group.product(&cell[1..=j]))
    }
}
