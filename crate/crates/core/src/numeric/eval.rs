//! Evaluation of expansions on discrete paths.
//!
//! A word `B_1 ... B_n` evaluates to the left-point iterated sum
//!
//! ```text
//! J_k(t_{m+1}) = J_k(t_m) + J_{k-1}(t_m) ΔB_k(m),   J_0 = 1,
//! ```
//!
//! where the increment of a block is the product of the increments of its
//! letters (the discrete iterated bracket). With these conventions the
//! quasi-shuffle identity `I_u I_v = I_{u ⨝ v}` holds exactly on every grid.

use std::collections::{BTreeMap, HashMap};

use crate::coeff::to_f64;
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::numeric::path::SamplePath;
use crate::word::BracketWord;

/// Letter id to the path it stands for.
pub type Binding = BTreeMap<u32, SamplePath>;

#[derive(Debug, Clone)]
struct Node {
    parent: usize,
    block: usize,
    depth: usize,
}

/// A prefix trie over the words of several expansions, so that shared
/// prefixes are summed once per step.
#[derive(Debug, Clone)]
pub struct EvalPlan {
    letters: Vec<u32>,
    blocks: Vec<Vec<usize>>,
    nodes: Vec<Node>,
    update_order: Vec<usize>,
    targets: Vec<Vec<(usize, f64)>>,
}

impl EvalPlan {
    pub fn new(expansions: &[&Expansion]) -> EvalPlan {
        let mut letters: Vec<u32> = Vec::new();
        let mut slot_of: HashMap<u32, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut nodes = vec![Node { parent: 0, block: usize::MAX, depth: 0 }];
        let mut child: HashMap<(usize, usize), usize> = HashMap::new();
        let mut targets = Vec::with_capacity(expansions.len());

        for e in expansions {
            let mut target = Vec::with_capacity(e.len());
            for (w, c) in e.iter() {
                let mut node = 0;
                for b in w.blocks() {
                    let slots: Vec<usize> = b
                        .letters()
                        .iter()
                        .map(|l| {
                            *slot_of.entry(l.id()).or_insert_with(|| {
                                letters.push(l.id());
                                letters.len() - 1
                            })
                        })
                        .collect();
                    let bi = *block_of.entry(slots.clone()).or_insert_with(|| {
                        blocks.push(slots);
                        blocks.len() - 1
                    });
                    node = *child.entry((node, bi)).or_insert_with(|| {
                        let depth = nodes[node].depth + 1;
                        nodes.push(Node { parent: node, block: bi, depth });
                        nodes.len() - 1
                    });
                }
                target.push((node, to_f64(c)));
            }
            targets.push(target);
        }
        let mut update_order: Vec<usize> = (1..nodes.len()).collect();
        update_order.sort_by(|&a, &b| nodes[b].depth.cmp(&nodes[a].depth).then(a.cmp(&b)));
        EvalPlan { letters, blocks, nodes, update_order, targets }
    }

    /// Letter ids the plan reads, in slot order.
    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    /// Number of distinct nonempty prefixes.
    pub fn prefix_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Terminal values of the planned expansions given, for every letter of
    /// [`EvalPlan::letters`], its increment sequence.
    #[allow(clippy::needless_range_loop)]
    pub fn run(&self, increments: &[&[f64]]) -> Result<Vec<f64>> {
        if increments.len() != self.letters.len() {
            return Err(Error::DimensionMismatch { expected: self.letters.len(), found: increments.len() });
        }
        let steps = increments.first().map_or(0, |s| s.len());
        if increments.iter().any(|s| s.len() != steps) {
            return Err(Error::GridMismatch);
        }
        let mut j = vec![0.0; self.nodes.len()];
        j[0] = 1.0;
        let mut db = vec![0.0; self.blocks.len()];
        for m in 0..steps {
            for (d, slots) in db.iter_mut().zip(&self.blocks) {
                *d = slots.iter().map(|&s| increments[s][m]).product();
            }
            for &n in &self.update_order {
                let node = &self.nodes[n];
                j[n] += j[node.parent] * db[node.block];
            }
        }
        Ok(self
            .targets
            .iter()
            .map(|t| t.iter().map(|&(n, c)| c * j[n]).sum())
            .collect())
    }

    /// [`EvalPlan::run`] with increments read off bound paths.
    pub fn run_binding(&self, binding: &Binding) -> Result<Vec<f64>> {
        let mut grid = None;
        let mut incs = Vec::with_capacity(self.letters.len());
        for id in &self.letters {
            let p = binding.get(id).ok_or(Error::UnboundLetter(*id))?;
            match grid {
                None => grid = Some(p.grid().clone()),
                Some(ref g) if !g.same_as(p.grid()) => return Err(Error::GridMismatch),
                _ => {}
            }
            incs.push(p.increments());
        }
        let refs: Vec<&[f64]> = incs.iter().map(Vec::as_slice).collect();
        if refs.is_empty() {
            // only the unit word can appear
            return Ok(self.targets.iter().map(|t| t.iter().map(|&(_, c)| c).sum()).collect());
        }
        self.run(&refs)
    }
}

/// Terminal value of `e` on the bound paths.
pub fn evaluate(e: &Expansion, binding: &Binding) -> Result<f64> {
    Ok(EvalPlan::new(&[e]).run_binding(binding)?[0])
}

/// Terminal value of a single word.
pub fn evaluate_word(w: &BracketWord, binding: &Binding) -> Result<f64> {
    evaluate(&Expansion::from_word(w.clone()), binding)
}
