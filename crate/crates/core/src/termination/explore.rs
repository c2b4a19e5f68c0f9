//! Depth-limited exhaustive exploration of all restricted chase
//! derivations.
//!
//! Depth counts fact sets: the database alone is a tree of depth 1, and a
//! node at depth d holds a derivation prefix of d fact sets (d - 1 trigger
//! applications). Children follow the canonical active-trigger order, and
//! canonical null naming makes equal trigger choices yield equal children.

use std::collections::BTreeMap;

use crate::engine::Derivation;
use crate::matching::{self, Trigger};
use crate::model::KnowledgeBase;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNodeKind {
    Inner(Vec<TreeNode>),
    /// No trigger is loaded and non-obsolete for the node's fact set.
    Saturated,
    /// The depth bound was reached with active triggers remaining.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// The trigger whose application produced this node; `None` at the root.
    pub trigger: Option<Trigger>,
    /// Sequence length at this node; the root is 1.
    pub depth: usize,
    pub kind: TreeNodeKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DepthStats {
    pub saturated: usize,
    pub open: usize,
    pub inner: usize,
}

#[derive(Debug, Clone)]
pub struct DerivationTree {
    pub depth_limit: usize,
    pub root: TreeNode,
    pub per_depth: BTreeMap<usize, DepthStats>,
    pub nodes: usize,
    pub saturated_leaves: usize,
    pub open_leaves: usize,
}

fn explore_node(d: &Derivation, depth: usize, depth_limit: usize, workers: usize) -> TreeNode {
    let active = matching::active_triggers(d.rules(), d.result());
    if active.is_empty() {
        return TreeNode { trigger: None, depth, kind: TreeNodeKind::Saturated };
    }
    if depth == depth_limit {
        return TreeNode { trigger: None, depth, kind: TreeNodeKind::Open };
    }
    let expand = |trigger: &Trigger| {
        let mut child = d.clone();
        child.chase_step(trigger).expect("active trigger applies");
        let mut node = explore_node(&child, depth + 1, depth_limit, workers);
        node.trigger = Some(trigger.clone());
        node
    };
    let children: Vec<TreeNode> = if workers > 1 {
        use rayon::prelude::*;
        active.par_iter().map(expand).collect()
    } else {
        active.iter().map(expand).collect()
    };
    TreeNode { trigger: None, depth, kind: TreeNodeKind::Inner(children) }
}

fn tally(node: &TreeNode, tree: &mut DerivationTree) {
    tree.nodes += 1;
    let stats = tree.per_depth.entry(node.depth).or_default();
    match &node.kind {
        TreeNodeKind::Saturated => {
            stats.saturated += 1;
            tree.saturated_leaves += 1;
        }
        TreeNodeKind::Open => {
            stats.open += 1;
            tree.open_leaves += 1;
        }
        TreeNodeKind::Inner(children) => {
            stats.inner += 1;
            for child in children {
                tally(child, tree);
            }
        }
    }
}

/// Builds the complete tree of chase derivations up to the depth bound.
/// Exploration branches are independent derivation clones; with
/// `workers > 1` the first level fans out across a thread pool and results
/// merge in canonical branch order.
pub fn explore(kb: &KnowledgeBase, depth: usize, workers: usize) -> DerivationTree {
    let root_derivation = Derivation::new(kb);
    let depth = depth.max(1);
    let root = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| explore_node(&root_derivation, 1, depth, workers))
    } else {
        explore_node(&root_derivation, 1, depth, 1)
    };
    let mut tree = DerivationTree {
        depth_limit: depth,
        root: TreeNode { trigger: None, depth: 1, kind: TreeNodeKind::Saturated },
        per_depth: BTreeMap::new(),
        nodes: 0,
        saturated_leaves: 0,
        open_leaves: 0,
    };
    tally(&root, &mut tree);
    tree.root = root;
    tree
}

impl DerivationTree {
    /// Depths of saturated leaves, ascending.
    pub fn saturated_depths(&self) -> Vec<usize> {
        self.per_depth
            .iter()
            .filter(|(_, s)| s.saturated > 0)
            .map(|(&d, _)| d)
            .collect()
    }

    pub fn has_open_leaf_at(&self, depth: usize) -> bool {
        self.per_depth.get(&depth).is_some_and(|s| s.open > 0)
    }
}
