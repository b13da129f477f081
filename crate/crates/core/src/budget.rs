/// Resource bounds for rewriting, exploration and checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Budget {
    /// Maximum number of rewrite steps along one path.
    pub rewrite_depth: usize,
    /// Maximum number of distinct states visited by one reachability search.
    pub explore_nodes: usize,
    /// Maximum size of candidate witnesses in modal formulae.
    pub witness_size: usize,
    /// Maximum number of terms assumed for one fixed point variable along a
    /// single tableau branch.
    pub unfold_guard: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { rewrite_depth: 64, explore_nodes: 10_000, witness_size: 5, unfold_guard: 256 }
    }
}

impl Budget {
    pub fn is_positive(&self) -> bool {
        self.rewrite_depth > 0 && self.explore_nodes > 0 && self.witness_size > 0 && self.unfold_guard > 0
    }
}
