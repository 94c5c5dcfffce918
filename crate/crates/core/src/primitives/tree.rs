use super::hash::{tag, Hasher, Salt, Seed};
use alloc::vec;
use alloc::vec::Vec;

/// Errors when rebuilding leaves from an opening.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeError {
    /// Opening has the wrong number of nodes for the hidden set.
    Length,
    /// Hidden index outside `[0, count)`.
    Index,
}

/// GGM binary tree in heap layout: node `i` has children `2i+1`, `2i+2`.
///
/// The tree has `L = count.next_power_of_two()` leaf slots; slots at or past
/// `count` are never derived nor revealed.
#[derive(Clone, Debug)]
pub struct SeedTree {
    count: usize,
    nodes: Vec<Seed>,
}

fn child(salt: &Salt, domain: u32, parent: &Seed, idx: usize) -> Seed {
    let mut h = Hasher::new(tag::TREE_NODE, salt);
    h.update(&domain.to_le_bytes()).update(parent).update(&(idx as u32).to_le_bytes());
    h.finish_seed()
}

fn depth(i: usize) -> u32 {
    usize::BITS - 1 - (i + 1).leading_zeros()
}

/// Leaf range `[lo, hi)` under node `i` for a tree with `leaves` slots.
fn span(i: usize, leaves: usize) -> (usize, usize) {
    let d = depth(i);
    let width = leaves >> d;
    let pos = i + 1 - (1usize << d);
    (pos * width, (pos + 1) * width)
}

impl SeedTree {
    /// Expands `root` into `count` leaves; `domain` separates trees sharing a salt.
    pub fn build(salt: &Salt, domain: u32, root: &Seed, count: usize) -> Self {
        assert!(count >= 1);
        let leaves = count.next_power_of_two();
        let mut nodes = vec![[0u8; 16]; 2 * leaves - 1];
        nodes[0] = *root;
        for i in 0..leaves - 1 {
            for c in [2 * i + 1, 2 * i + 2] {
                if span(c, leaves).0 < count {
                    nodes[c] = child(salt, domain, &nodes[i], c);
                }
            }
        }
        Self { count, nodes }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn leaf(&self, j: usize) -> &Seed {
        assert!(j < self.count);
        &self.nodes[self.count.next_power_of_two() - 1 + j]
    }

    pub fn leaves(&self) -> Vec<Seed> {
        (0..self.count).map(|j| *self.leaf(j)).collect()
    }

    /// Node seeds revealing every leaf except those flagged in `hidden`.
    pub fn open(&self, hidden: &[bool]) -> Vec<Seed> {
        opening_nodes(self.count, hidden).into_iter().map(|i| self.nodes[i]).collect()
    }

    /// Opening for a single hidden leaf.
    pub fn open_one(&self, alpha: usize) -> Vec<Seed> {
        let mut hidden = vec![false; self.count];
        hidden[alpha] = true;
        self.open(&hidden)
    }
}

/// Heap indices of the nodes revealed for a hidden set, in increasing order.
pub fn opening_nodes(count: usize, hidden: &[bool]) -> Vec<usize> {
    assert_eq!(hidden.len(), count);
    let leaves = count.next_power_of_two();
    // covers_hidden[i]: subtree of i contains a hidden leaf
    let mut covers_hidden = vec![false; 2 * leaves - 1];
    for (j, &h) in hidden.iter().enumerate() {
        if h {
            let mut i = leaves - 1 + j;
            loop {
                covers_hidden[i] = true;
                if i == 0 {
                    break;
                }
                i = (i - 1) / 2;
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..2 * leaves - 1 {
        let used = span(i, leaves).0 < count;
        let parent_hidden = i == 0 || covers_hidden[(i - 1) / 2];
        if used && !covers_hidden[i] && parent_hidden {
            out.push(i);
        }
    }
    out
}

/// Number of seeds in the opening of a single hidden leaf.
pub fn opening_len_one(count: usize, alpha: usize) -> usize {
    let mut hidden = vec![false; count];
    hidden[alpha] = true;
    opening_nodes(count, &hidden).len()
}

/// Rebuilds the leaves not flagged in `hidden`; hidden leaves are `None`.
pub fn recover(
    salt: &Salt,
    domain: u32,
    count: usize,
    hidden: &[bool],
    opening: &[Seed],
) -> Result<Vec<Option<Seed>>, TreeError> {
    if hidden.len() != count || count == 0 {
        return Err(TreeError::Index);
    }
    let positions = opening_nodes(count, hidden);
    if positions.len() != opening.len() {
        return Err(TreeError::Length);
    }
    let leaves = count.next_power_of_two();
    let mut nodes: Vec<Option<Seed>> = vec![None; 2 * leaves - 1];
    for (&i, s) in positions.iter().zip(opening) {
        nodes[i] = Some(*s);
    }
    for i in 0..leaves - 1 {
        if let Some(s) = nodes[i] {
            for c in [2 * i + 1, 2 * i + 2] {
                if span(c, leaves).0 < count {
                    nodes[c] = Some(child(salt, domain, &s, c));
                }
            }
        }
    }
    Ok((0..count).map(|j| nodes[leaves - 1 + j]).collect())
}

/// Rebuilds all leaves except `alpha`.
pub fn recover_one(
    salt: &Salt,
    domain: u32,
    count: usize,
    alpha: usize,
    opening: &[Seed],
) -> Result<Vec<Option<Seed>>, TreeError> {
    if alpha >= count {
        return Err(TreeError::Index);
    }
    let mut hidden = vec![false; count];
    hidden[alpha] = true;
    recover(salt, domain, count, &hidden, opening)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_leaves_open_with_one_node() {
        let t = SeedTree::build(&[0; 32], 0, &[5; 16], 2);
        assert_eq!(t.open_one(0).len(), 1);
        assert_eq!(t.open_one(0)[0], *t.leaf(1));
    }

    #[test]
    fn eight_leaves_hide_one() {
        let salt = [9; 32];
        let t = SeedTree::build(&salt, 3, &[1; 16], 8);
        let op = t.open_one(2);
        assert_eq!(op.len(), 3);
        let rec = recover_one(&salt, 3, 8, 2, &op).unwrap();
        for j in 0..8 {
            if j == 2 {
                assert!(rec[j].is_none());
            } else {
                assert_eq!(rec[j].unwrap(), *t.leaf(j));
            }
        }
    }

    #[test]
    fn non_power_of_two_counts() {
        let salt = [4; 32];
        for count in 1..40 {
            let t = SeedTree::build(&salt, 0, &[7; 16], count);
            for alpha in 0..count {
                let op = t.open_one(alpha);
                assert!(op.len() <= count.next_power_of_two().trailing_zeros() as usize);
                let rec = recover_one(&salt, 0, count, alpha, &op).unwrap();
                for j in 0..count {
                    assert_eq!(rec[j].is_none(), j == alpha);
                    if j != alpha {
                        assert_eq!(rec[j].unwrap(), *t.leaf(j));
                    }
                }
            }
        }
    }

    #[test]
    fn arbitrary_hidden_sets() {
        let salt = [2; 32];
        let count = 23;
        let t = SeedTree::build(&salt, 1, &[3; 16], count);
        let hidden: Vec<bool> = (0..count).map(|j| j % 5 == 1 || j == 22).collect();
        let op = t.open(&hidden);
        let rec = recover(&salt, 1, count, &hidden, &op).unwrap();
        for j in 0..count {
            assert_eq!(rec[j].is_none(), hidden[j]);
            if !hidden[j] {
                assert_eq!(rec[j].unwrap(), *t.leaf(j));
            }
        }
        assert_eq!(recover(&salt, 1, count, &hidden, &op[1..]), Err(TreeError::Length));
    }

    #[test]
    fn nothing_hidden_reveals_root() {
        let t = SeedTree::build(&[0; 32], 0, &[8; 16], 5);
        assert_eq!(t.open(&[false; 5]), alloc::vec![[8u8; 16]]);
    }
}
