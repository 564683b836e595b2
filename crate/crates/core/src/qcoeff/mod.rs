//! Exact scalars: Laurent polynomials in q, rational functions, truncated
//! series in z, and cyclotomic quotients for root-of-unity evaluation.

mod cyclo;
mod field;
mod laurent;
mod rational;
mod series;

pub use cyclo::{cyclotomic_poly, eval_cyclotomic, set_disk_cache, CycloElem};
pub use field::{CycloField, Field, GenericQ};
pub use laurent::{qbinom, qfactorial, qint, LaurentPoly};
pub use rational::{Frac, RationalQ};
pub use series::{series_exp, series_log, series_of_rational, Direction, QSeries};
