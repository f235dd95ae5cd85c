//! End-to-end realization of a Matoušek USO by an exact P-LCP instance.

use crate::cube::Orientation;
use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::matousek::{build_matousek, canonicalize, InfluenceGraph};
use crate::matroid::CyclicExtension;
use crate::plcp::{plcp_to_uso, realization_matrix, translate_to_plcp, PlcpInstance};
use crate::realizability::{find_forbidden, is_branching_closure, synthesize_extension, Branching};

#[derive(Clone, Debug)]
pub struct Realization {
    pub branching: Branching,
    pub extension: CyclicExtension,
    pub matrix: RationalMatrix,
    pub instance: PlcpInstance,
}

/// Synthesizes the extension for `g` and translates its moment-curve
/// realization into `(M, q)`. Graphs with a forbidden subgraph are rejected
/// with the witness.
pub fn realize(g: &InfluenceGraph) -> Result<Realization> {
    if let Some(w) = find_forbidden(g) {
        return Err(Error::NotRealizable(w));
    }
    let branching = is_branching_closure(g).ok_or_else(|| {
        Error::Internal("graph without forbidden subgraph is not a branching closure".into())
    })?;
    let extension = synthesize_extension(&branching);
    let matrix = realization_matrix(&extension, None)?;
    let instance = translate_to_plcp(&matrix)?;
    Ok(Realization {
        branching,
        extension,
        matrix,
        instance,
    })
}

impl Realization {
    /// The orientation induced by the instance, mirrored so its sink is `∅`.
    pub fn canonical_orientation(&self) -> Result<Orientation> {
        canonicalize(&plcp_to_uso(&self.instance)?)
    }

    /// Whether the instance induces exactly the Matoušek USO of `g`.
    pub fn verify(&self, g: &InfluenceGraph) -> Result<bool> {
        Ok(self.canonical_orientation()? == build_matousek(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{integer, RationalMatrix};
    use crate::realizability::ForbiddenKind;

    #[test]
    fn one_dimension() {
        let g = InfluenceGraph::loops_only(1).unwrap();
        let r = realize(&g).unwrap();
        assert_eq!(r.instance.m(), &RationalMatrix::from_i64(&[&[1]]).unwrap());
        assert_eq!(r.instance.q(), &[integer(-1)]);
        assert!(r.verify(&g).unwrap());
    }

    #[test]
    fn chain_of_three() {
        let g = InfluenceGraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(realize(&g).unwrap().verify(&g).unwrap());
    }

    #[test]
    fn forbidden_graph_is_rejected() {
        let g = InfluenceGraph::new(3, [(1, 3), (2, 3)]).unwrap();
        match realize(&g) {
            Err(Error::NotRealizable(w)) => assert_eq!(w.kind, ForbiddenKind::G2),
            other => panic!("expected NotRealizable, got {other:?}"),
        }
    }
}
