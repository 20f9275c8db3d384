//! Union-find and set-partition helpers shared by the group and congruence code.

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    classes: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            classes: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns false if they were already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.classes -= 1;
        true
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    /// Class labels numbered by first appearance (point 0 is always in class 0).
    pub fn class_labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let roots: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        normalize_labels(&roots)
    }
}

/// Renumbers arbitrary class labels so that classes are numbered 0,1,... in
/// order of their least element.
pub fn normalize_labels(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Converts a class-label vector into explicit blocks, each sorted, blocks
/// ordered by least element.
pub fn labels_to_blocks(labels: &[usize]) -> Vec<Vec<usize>> {
    let normalized = normalize_labels(labels);
    let count = normalized.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (x, &c) in normalized.iter().enumerate() {
        blocks[c].push(x);
    }
    blocks
}

/// Inverse of [`labels_to_blocks`]; returns `None` unless the blocks partition `0..n`.
pub fn blocks_to_labels(n: usize, blocks: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut labels = vec![usize::MAX; n];
    for (c, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return None;
        }
        for &x in block {
            if x >= n || labels[x] != usize::MAX {
                return None;
            }
            labels[x] = c;
        }
    }
    if labels.contains(&usize::MAX) {
        return None;
    }
    Some(normalize_labels(&labels))
}

/// All set partitions of `0..n` as normalized label vectors (restricted growth strings).
pub fn all_set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(pos: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max {
            cur[pos] = c;
            rec(pos + 1, max.max(c + 1), cur, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    rec(1, 1, &mut cur, &mut out);
    out
}
