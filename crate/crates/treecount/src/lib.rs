//! Exact conjugacy-class lattice-point counting on regular trees.
//!
//! A finite connected (q+1)-regular graph has the (q+1)-regular tree as its
//! universal cover, with the deck group acting freely as a free group of
//! rank `|E| - |V| + 1`. For a conjugacy class `K` of that group, this crate
//! counts `N_K(x, n)`: the number of elements of `K` moving a tree vertex
//! `x` by at most `n`. The count is an exact integer obtained by enumerating
//! the radius-`n` ball, and is cross-checked against a spectral closed form
//! built from the Laplacian eigendecomposition of the quotient graph.
//!
//! The main pipeline:
//!
//! 1. [`graph`]: parse and validate a regular graph.
//! 2. [`words`]: conjugacy classes as cyclically non-backtracking closed
//!    walks, with length `mu` and primitive multiplicity `nu`.
//! 3. [`cover`]: tree vertices as non-backtracking arc paths; deck action;
//!    displacement and ball enumeration.
//! 4. [`counter`]: exact count tables by fiber enumeration, plus an
//!    independent conjugate-enumeration oracle.
//! 5. [`spectral`]: spherical functions, Fourier coefficients, and the
//!    meromorphic closed form for the generating function.
//! 6. [`asymptotics`]: growth constants, residue, convergence diagnostics,
//!    and the bipartite bracket.
//! 7. [`verify`]: the self-contained verification suite over embedded
//!    fixtures.
//!
//! # Counting a class
//!
//! ```
//! use treecount::counter::count_class;
//! use treecount::cover::TreePath;
//! use treecount::fixtures;
//! use treecount::words::{class_of_walk, SpanningTree, Walk};
//!
//! let g = fixtures::k4();
//! let st = SpanningTree::new(&g, 0);
//! let walk = Walk::from_vertices(&g, &[0, 1, 2, 0]).unwrap();
//! let k = class_of_walk(&g, &walk).unwrap();
//! assert_eq!((k.mu, k.nu), (3, 1));
//!
//! let table = count_class(&g, &st, &k, &TreePath::root(), 9, 1_000_000).unwrap();
//! assert_eq!(table.count_at(3), 1); // the axis through the basepoint
//! assert_eq!(table.count_at(9), 7);
//! ```
//!
//! # Spectral cross-check
//!
//! ```
//! use num_complex::Complex64;
//! use treecount::counter::count_class;
//! use treecount::cover::TreePath;
//! use treecount::fixtures;
//! use treecount::spectral::{eigendecompose, g_closed, g_series};
//! use treecount::words::{class_of_walk, SpanningTree, Walk};
//!
//! let g = fixtures::k4();
//! let st = SpanningTree::new(&g, 0);
//! let k = class_of_walk(&g, &Walk::from_vertices(&g, &[0, 1, 2, 0]).unwrap()).unwrap();
//! let spec = eigendecompose(&g);
//! let table = count_class(&g, &st, &k, &TreePath::root(), 15, 1_000_000).unwrap();
//!
//! let s = Complex64::new(2.5, 0.0);
//! let closed = g_closed(&g, &spec, &k, 0, s).unwrap();
//! let series = g_series(&table, s);
//! let err = (closed.value - series.value).norm();
//! assert!(err < 1e-6 * closed.value.norm() + series.tail_bound);
//! ```
//!
//! # Growth diagnostics
//!
//! ```
//! use treecount::asymptotics::{constants, convergence_report};
//! use treecount::counter::count_class;
//! use treecount::cover::TreePath;
//! use treecount::fixtures;
//! use treecount::words::{class_of_walk, SpanningTree, Walk};
//!
//! let g = fixtures::k4();
//! let st = SpanningTree::new(&g, 0);
//! let k = class_of_walk(&g, &Walk::from_vertices(&g, &[0, 1, 2, 0]).unwrap()).unwrap();
//! let c = constants(&g, &k);
//! assert!((c.theorem_constant - 0.75).abs() < 1e-12);
//!
//! let table = count_class(&g, &st, &k, &TreePath::root(), 15, 1_000_000).unwrap();
//! let d = convergence_report(&table, &c).unwrap();
//! assert!(d.final_deviation < 0.11);
//! ```

pub mod asymptotics;
pub mod counter;
pub mod cover;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod spectral;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
