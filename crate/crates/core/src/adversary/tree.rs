//! Adversary game trees and their exact minimax solution.
//!
//! The adversary reveals job sizes, the algorithm places each revealed job,
//! and leaves hold the completed instance. The value of a leaf is the ratio
//! of the path-induced makespan to the chosen optimum reference; the
//! algorithm minimises, the adversary maximises.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{apply_assignment, Instance};
use crate::oracle::{competitive_ratio, opt_exact, OptReference, RatioKind};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// The adversary picks one option: reveal a job (an `Algorithm` node
    /// carrying the size) or stop (a `Leaf`).
    Adversary {
        options: Vec<Node>,
    },
    /// The algorithm places a job of `size` on one of the listed machines
    /// (1-based machine, subtree).
    Algorithm {
        size: Rational,
        children: Vec<(usize, Node)>,
    },
    Leaf {
        instance: Instance,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryTree {
    pub name: String,
    pub machines: usize,
    pub declared_sum: Rational,
    pub root: Node,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum GameMove {
    Reveal { size: Rational },
    Place { size: Rational, machine: usize },
}

/// Root value plus one optimal line of play for both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimaxSolution {
    pub kind: RatioKind,
    pub value: Rational,
    pub principal_line: Vec<GameMove>,
    pub final_sizes: Vec<Rational>,
    pub final_assignment: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TreeSummary {
    pub adversary_nodes: usize,
    pub algorithm_nodes: usize,
    pub leaves: usize,
    pub depth: usize,
}

impl AdversaryTree {
    /// Builds the alternating tree over the prefix tree of `sequences`.
    ///
    /// At every point the adversary may continue with any next size some
    /// sequence shares with the revealed prefix, or stop if a sequence ends
    /// there. Every algorithm node offers all `machines` placements.
    pub fn from_sequences(name: impl Into<String>, machines: usize, sequences: &[Vec<Rational>]) -> Result<Self> {
        let first = sequences
            .first()
            .ok_or_else(|| Error::InvalidTree("no sequences".into()))?;
        let declared_sum: Rational = first.iter().sum();
        for seq in sequences {
            crate::model::classify_pattern(seq)?;
            let total: Rational = seq.iter().sum();
            if total != declared_sum {
                return Err(Error::InvalidTree(format!(
                    "sequence {seq:?} sums to {total}, family Sum is {declared_sum}"
                )));
            }
        }
        let refs: Vec<&[Rational]> = sequences.iter().map(Vec::as_slice).collect();
        let root = build_adversary(machines, &refs, 0)?;
        let tree = AdversaryTree {
            name: name.into(),
            machines,
            declared_sum,
            root,
        };
        tree.validate()?;
        Ok(tree)
    }

    /// Checks path consistency: revealed sizes never increase, every leaf
    /// holds exactly the revealed sizes, every path totals the declared Sum,
    /// and placements name distinct machines in range.
    pub fn validate(&self) -> Result<()> {
        let mut revealed = Vec::new();
        self.validate_node(&self.root, &mut revealed)
    }

    fn validate_node(&self, node: &Node, revealed: &mut Vec<Rational>) -> Result<()> {
        match node {
            Node::Adversary { options } => {
                if options.is_empty() {
                    return Err(Error::InvalidTree("adversary node without options".into()));
                }
                for option in options {
                    if matches!(option, Node::Adversary { .. }) {
                        return Err(Error::InvalidTree(
                            "adversary node directly below adversary node".into(),
                        ));
                    }
                    self.validate_node(option, revealed)?;
                }
                Ok(())
            }
            Node::Algorithm { size, children } => {
                if revealed.last().is_some_and(|last| size > last) {
                    return Err(Error::InvalidTree(format!("size {size} revealed after a smaller job")));
                }
                if children.is_empty() {
                    return Err(Error::InvalidTree("algorithm node without placements".into()));
                }
                let mut seen = vec![false; self.machines + 1];
                for (machine, _) in children {
                    if *machine == 0 || *machine > self.machines || seen[*machine] {
                        return Err(Error::InvalidTree(format!("bad or repeated machine {machine}")));
                    }
                    seen[*machine] = true;
                }
                revealed.push(*size);
                for (_, child) in children {
                    if matches!(child, Node::Algorithm { .. }) {
                        return Err(Error::InvalidTree("placement followed by another placement".into()));
                    }
                    self.validate_node(child, revealed)?;
                }
                revealed.pop();
                Ok(())
            }
            Node::Leaf { instance } => {
                if instance.sizes() != revealed.as_slice() {
                    return Err(Error::InvalidTree(format!(
                        "leaf {:?} differs from revealed path {:?}",
                        instance.sizes(),
                        revealed
                    )));
                }
                if instance.machines() != self.machines {
                    return Err(Error::InvalidTree("leaf machine count differs from tree".into()));
                }
                if instance.sum() != self.declared_sum {
                    return Err(Error::InvalidTree(format!(
                        "path total {} differs from declared Sum {}",
                        instance.sum(),
                        self.declared_sum
                    )));
                }
                Ok(())
            }
        }
    }

    /// True when every algorithm node offers all `machines` placements.
    pub fn is_complete(&self) -> bool {
        fn walk(node: &Node, m: usize) -> bool {
            match node {
                Node::Adversary { options } => options.iter().all(|o| walk(o, m)),
                Node::Algorithm { children, .. } => children.len() == m && children.iter().all(|(_, c)| walk(c, m)),
                Node::Leaf { .. } => true,
            }
        }
        walk(&self.root, self.machines)
    }

    pub fn summary(&self) -> TreeSummary {
        fn walk(node: &Node, depth: usize, acc: &mut TreeSummary) {
            acc.depth = acc.depth.max(depth);
            match node {
                Node::Adversary { options } => {
                    acc.adversary_nodes += 1;
                    options.iter().for_each(|o| walk(o, depth + 1, acc));
                }
                Node::Algorithm { children, .. } => {
                    acc.algorithm_nodes += 1;
                    children.iter().for_each(|(_, c)| walk(c, depth + 1, acc));
                }
                Node::Leaf { .. } => acc.leaves += 1,
            }
        }
        let mut acc = TreeSummary::default();
        walk(&self.root, 0, &mut acc);
        acc
    }

    /// Distinct completed instances reachable in the tree.
    pub fn leaf_instances(&self) -> Vec<Instance> {
        fn walk(node: &Node, out: &mut Vec<Instance>) {
            match node {
                Node::Adversary { options } => options.iter().for_each(|o| walk(o, out)),
                Node::Algorithm { children, .. } => children.iter().for_each(|(_, c)| walk(c, out)),
                Node::Leaf { instance } => {
                    if !out.contains(instance) {
                        out.push(instance.clone());
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }
}

fn build_adversary(machines: usize, sequences: &[&[Rational]], depth: usize) -> Result<Node> {
    let mut options = Vec::new();
    let ended: Vec<&[Rational]> = sequences.iter().copied().filter(|s| s.len() == depth).collect();
    if let Some(seq) = ended.first() {
        options.push(Node::Leaf {
            instance: Instance::new(machines, seq.to_vec())?,
        });
    }
    let mut next_sizes: Vec<Rational> = sequences.iter().filter(|s| s.len() > depth).map(|s| s[depth]).collect();
    next_sizes.sort_by(|a, b| b.cmp(a));
    next_sizes.dedup();
    for size in next_sizes {
        let continuing: Vec<&[Rational]> = sequences
            .iter()
            .copied()
            .filter(|s| s.len() > depth && s[depth] == size)
            .collect();
        let subtree = build_adversary(machines, &continuing, depth + 1)?;
        let children = (1..=machines).map(|j| (j, subtree.clone())).collect();
        options.push(Node::Algorithm { size, children });
    }
    Ok(Node::Adversary { options })
}

/// Caches the optimum reference per distinct leaf instance.
struct Solver {
    kind: RatioKind,
    machines: usize,
    references: HashMap<Vec<Rational>, OptReference>,
}

impl Solver {
    fn leaf_value(&mut self, instance: &Instance, assignment: &[usize]) -> Result<Rational> {
        let reference = match self.references.get(instance.sizes()) {
            Some(r) => r.clone(),
            None => {
                let r = opt_exact(instance)?;
                self.references.insert(instance.sizes().to_vec(), r.clone());
                r
            }
        };
        let outcome = apply_assignment(instance, assignment)?;
        competitive_ratio(&outcome, &reference, self.kind)
    }

    /// Returns the node value and the optimal continuation from it.
    fn solve(
        &mut self,
        node: &Node,
        assignment: &mut Vec<usize>,
    ) -> Result<(Rational, Vec<GameMove>, Option<Instance>)> {
        match node {
            Node::Leaf { instance } => {
                if instance.machines() != self.machines {
                    return Err(Error::InvalidTree("leaf machine count differs from tree".into()));
                }
                let value = self.leaf_value(instance, assignment)?;
                Ok((value, Vec::new(), Some(instance.clone())))
            }
            Node::Adversary { options } => {
                let mut best: Option<(Rational, Vec<GameMove>, Option<Instance>)> = None;
                for option in options {
                    let (value, mut line, leaf) = self.solve(option, assignment)?;
                    if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                        if let Node::Algorithm { size, .. } = option {
                            line.insert(0, GameMove::Reveal { size: *size });
                        }
                        best = Some((value, line, leaf));
                    }
                }
                best.ok_or_else(|| Error::InvalidTree("adversary node without options".into()))
            }
            Node::Algorithm { size, children } => {
                let mut best: Option<(Rational, Vec<GameMove>, Option<Instance>)> = None;
                for (machine, child) in children {
                    assignment.push(*machine);
                    let solved = self.solve(child, assignment);
                    assignment.pop();
                    let (value, mut line, leaf) = solved?;
                    if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
                        line.insert(
                            0,
                            GameMove::Place {
                                size: *size,
                                machine: *machine,
                            },
                        );
                        best = Some((value, line, leaf));
                    }
                }
                best.ok_or_else(|| Error::InvalidTree("algorithm node without placements".into()))
            }
        }
    }
}

/// Exact game value and a principal line. Ties keep the first option in
/// tree order.
pub fn solve_minimax(tree: &AdversaryTree, kind: RatioKind) -> Result<MinimaxSolution> {
    let mut solver = Solver {
        kind,
        machines: tree.machines,
        references: HashMap::new(),
    };
    let (value, principal_line, leaf) = solver.solve(&tree.root, &mut Vec::new())?;
    let final_assignment = principal_line
        .iter()
        .filter_map(|mv| match mv {
            GameMove::Place { machine, .. } => Some(*machine),
            GameMove::Reveal { .. } => None,
        })
        .collect();
    Ok(MinimaxSolution {
        kind,
        value,
        principal_line,
        final_sizes: leaf.map(|i| i.sizes().to_vec()).unwrap_or_default(),
        final_assignment,
    })
}

/// The best ratio any deterministic algorithm can guarantee against the family.
pub fn minimax_value(tree: &AdversaryTree, kind: RatioKind) -> Result<Rational> {
    Ok(solve_minimax(tree, kind)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn forced_single_leaf() {
        let instance = Instance::from_integers(2, &[1, 1]).unwrap();
        let tree = AdversaryTree {
            name: "forced".into(),
            machines: 2,
            declared_sum: q(2),
            root: Node::Adversary {
                options: vec![Node::Algorithm {
                    size: q(1),
                    children: vec![(
                        1,
                        Node::Adversary {
                            options: vec![Node::Algorithm {
                                size: q(1),
                                children: vec![(2, Node::Leaf { instance })],
                            }],
                        },
                    )],
                }],
            },
        };
        tree.validate().unwrap();
        assert!(!tree.is_complete());
        let sol = solve_minimax(&tree, RatioKind::VsExact).unwrap();
        assert_eq!(sol.value, q(1));
        assert_eq!(sol.final_assignment, vec![1, 2]);
    }

    #[test]
    fn prefix_tree_shape() {
        let seqs = vec![vec![q(3), q(2), q(1)], vec![q(3), q(3)]];
        let tree = AdversaryTree::from_sequences("toy", 2, &seqs).unwrap();
        assert!(tree.is_complete());
        let s = tree.summary();
        // reveal 3, place (2), reveal 3 or 2, ...
        assert_eq!(s.leaves, 2 * 2 + 2 * 2 * 2);
        assert_eq!(tree.leaf_instances().len(), 2);
        // {3,2,1}: best 3|3 -> 1; {3,3}: 3|3 -> 1.
        assert_eq!(minimax_value(&tree, RatioKind::VsLbFormula).unwrap(), q(1));
    }

    #[test]
    fn rejects_inconsistent_families() {
        let seqs = vec![vec![q(3), q(2)], vec![q(3), q(3)]];
        assert!(matches!(
            AdversaryTree::from_sequences("bad", 2, &seqs),
            Err(Error::InvalidTree(_))
        ));
        let seqs = vec![vec![q(2), q(3)]];
        assert!(matches!(
            AdversaryTree::from_sequences("bad", 2, &seqs),
            Err(Error::NotNonIncreasing { .. })
        ));
    }

    #[test]
    fn validate_catches_leaf_mismatch() {
        let tree = AdversaryTree {
            name: "mismatch".into(),
            machines: 2,
            declared_sum: q(2),
            root: Node::Adversary {
                options: vec![Node::Algorithm {
                    size: q(2),
                    children: vec![(
                        1,
                        Node::Leaf {
                            instance: Instance::from_integers(2, &[1, 1]).unwrap(),
                        },
                    )],
                }],
            },
        };
        assert!(matches!(tree.validate(), Err(Error::InvalidTree(_))));
    }
}
