//! Instance generators from the hardness reductions, each with a known
//! ground truth.
//!
//! * [`graph_to_relation`]: `V₁ ⊥ V₂` holds iff `(V₁, V₂)` is a biclique
//!   with edge-free sides.
//! * [`dnf_to_index_relation`] and [`conjoin_index_relations`]: index
//!   relations whose indicator `Y ↦ [Y ⊥ i]` equals a formula's truth
//!   function.
//! * [`index_to_plain`]: removes the need to name the index column.

mod formula;
mod graph;
mod index;

pub use formula::{
    dnf_blocks, dnf_to_index_relation, eval_conjunction, formula_to_plain, formula_to_relation, parse_formula,
    render_formula, AntimonotoneDnf, DnfBlocks,
};
pub use graph::{graph_to_relation, Graph};
pub use index::{conjoin_index_relations, index_to_plain, Cell, IndexRelation, INDEX_NAME};
