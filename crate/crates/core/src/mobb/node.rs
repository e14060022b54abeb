use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::config::NodeSelection;
use crate::error::{Error, Result};
use crate::lp::Cut;
use crate::model::Fixings;

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub parent: Option<usize>,
    pub fixings: Fixings,
    /// Gap inherited from the parent; replaced by the node's own value once
    /// it is evaluated.
    pub gap: f64,
    /// Axis-parallel facet offsets of the parent's bound set.
    pub parent_facets: Option<Vec<f64>>,
    /// Local upper bounds that survived against the parent's bound set.
    pub parent_surviving: Vec<Vec<i64>>,
    /// Level-set cuts active in this subproblem.
    pub cuts: Vec<Cut>,
}

impl Node {
    pub fn root(n: usize, cuts: Vec<Cut>) -> Self {
        Node {
            id: 0,
            parent: None,
            fixings: Fixings::none(n),
            gap: f64::INFINITY,
            parent_facets: None,
            parent_surviving: Vec::new(),
            cuts,
        }
    }

    /// Number of fixed variables.
    pub fn depth(&self) -> usize {
        self.fixings.fixed_count()
    }
}

struct ByGap(Node);

impl PartialEq for ByGap {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ByGap {}

impl PartialOrd for ByGap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByGap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .gap
            .total_cmp(&other.0.gap)
            .then(self.0.id.cmp(&other.0.id))
    }
}

/// Open nodes, popped according to the node selection rule: LIFO for
/// depth first, FIFO for breadth first, largest gap (newest on ties)
/// otherwise.
pub struct NodeQueue {
    inner: Inner,
}

enum Inner {
    Stack(Vec<Node>),
    Fifo(VecDeque<Node>),
    Heap(BinaryHeap<ByGap>),
}

impl NodeQueue {
    pub fn new(rule: NodeSelection) -> Self {
        let inner = match rule {
            NodeSelection::DepthFirst => Inner::Stack(Vec::new()),
            NodeSelection::BreadthFirst => Inner::Fifo(VecDeque::new()),
            NodeSelection::Lhg | NodeSelection::Hsz => Inner::Heap(BinaryHeap::new()),
        };
        NodeQueue { inner }
    }

    pub fn push(&mut self, node: Node) {
        match &mut self.inner {
            Inner::Stack(v) => v.push(node),
            Inner::Fifo(v) => v.push_back(node),
            Inner::Heap(h) => h.push(ByGap(node)),
        }
    }

    pub fn len(&self) -> usize {
        match &self.inner {
            Inner::Stack(v) => v.len(),
            Inner::Fifo(v) => v.len(),
            Inner::Heap(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn select(&mut self) -> Result<Node> {
        let node = match &mut self.inner {
            Inner::Stack(v) => v.pop(),
            Inner::Fifo(v) => v.pop_front(),
            Inner::Heap(h) => h.pop().map(|b| b.0),
        };
        node.ok_or(Error::Empty("node queue"))
    }
}
