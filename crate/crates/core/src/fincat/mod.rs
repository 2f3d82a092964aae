//! Finite categories, presheaves on them, and finite (co)limits of sets.

mod category;
mod limits;
mod ops;
mod presheaf;
mod search;
mod set;

pub use category::{CategoryBuilder, FinCategory, Morphism};
pub use limits::{finite_colimit, finite_limit, Cocone, Cone, FinDiagram};
#[allow(unused_imports)]
pub(crate) use limits::{graph_colimit, graph_limit, Classes};
pub use ops::{coproduct, image_factorization, product, pullback, subpresheaf, Pullback};
pub use presheaf::{Presheaf, PshMap};
pub use search::{HomSearch, SearchOrder};
pub use set::{all_functions, FinFn, FinSet};
