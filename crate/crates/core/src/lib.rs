//! Exact-arithmetic invariants and isomorphism decisions for orientable
//! torus bundles over closed orientable surfaces.
//!
//! The pipeline runs from integer matrix arithmetic up to a full bundle
//! isomorphism test:
//!
//! - [`sl2z`]: SL(2,Z) and PSL(2,Z) words, orders, conjugacy.
//! - [`lattice`]: Smith normal form, lattice membership with witnesses,
//!   quotient modules of Z².
//! - [`freeprod`]: folded core graphs for finitely generated subgroups of
//!   free products of finite cyclic groups, with Kurosh invariants.
//! - [`rep`]: surface group representations into SL(2,Z), normal forms,
//!   lift orbits.
//! - [`bundle`]: torus bundles over surfaces, Euler classes, isomorphism
//!   verdicts with certificates, symplectic existence predicates.
//! - [`schema`]: JSON document form of a bundle for the CLI.

pub mod bundle;
pub mod error;
pub mod freeprod;
pub mod lattice;
#[doc(hidden)]
pub mod oracle;
pub mod rep;
pub mod schema;
pub mod sl2z;

pub use bundle::{
    betti1_flat, compatible_symplectic, decompose, euler_columns, euler_module, euler_torsion,
    fiber_sum, iso, iso_genus0, iso_genus1, iso_main, normalize_genus1, total_space_symplectic,
    verify_certificate, Certificate, Genus1Certificate, IsoVerdict, MainCertificate, Separation,
    TorusBundle,
};
pub use error::Error;
pub use lattice::{
    member_with_witness, quotient, rank, smith_normal_form, unimodular_reduce, IntMatrix,
    QuotientModule, QuotientTransform,
};
pub use rep::{
    canonicalize_lift, contains_minus_identity, enumerate_lifts, is_normal_form, lift_orbit_tag,
    orbit_invariant, project_rep, same_sl_image, LiftOrbitTag, NormalFormCertificate, PslRep,
    SlRep,
};
pub use sl2z::conj::sl_conjugate;
pub use sl2z::psl::{centralizer_root, lift_word, project, psl_conjugate, PslLetter, PslWord};
pub use sl2z::{matrix_to_word, word_to_matrix, Sl2Matrix, SlGen, SlWord};
