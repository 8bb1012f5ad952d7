//! Surgery presentations in the supported link families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a link component is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Surgery component, colored by `ω_p`.
    Surgery,
    /// Component of the banded link inside the manifold, colored `e_c`.
    Banded(u32),
}

/// A framed link in `S³` from one of the evaluable families, with a role per component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pattern", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurgeryPresentation {
    /// Unknots clasped along the edges of a forest; edges carry linking `±1`.
    ChainForest {
        framings: Vec<i64>,
        #[serde(default)]
        edges: Vec<(usize, usize, i64)>,
        roles: Vec<Role>,
    },
    /// The `(2, 2l)` torus link with framings `k_1, k_2`.
    TwistedPair {
        linking: i64,
        framings: [i64; 2],
        roles: [Role; 2],
    },
    /// Arbitrary framed link given only by its linking matrix (theories 1 and 2).
    LinkingMatrix {
        matrix: Vec<Vec<i64>>,
        roles: Vec<Role>,
    },
    /// Split union of links; surgery gives the connected sum.
    DisjointUnion { parts: Vec<SurgeryPresentation> },
}

impl SurgeryPresentation {
    /// The empty link, presenting `S³`.
    pub fn empty() -> Self {
        SurgeryPresentation::ChainForest {
            framings: vec![],
            edges: vec![],
            roles: vec![],
        }
    }

    /// A single unknot.
    pub fn unknot(framing: i64, role: Role) -> Self {
        SurgeryPresentation::ChainForest {
            framings: vec![framing],
            edges: vec![],
            roles: vec![role],
        }
    }

    /// Surgery on the `k`-framed unknot (the lens space `L(k, 1)`, `S¹×S²` for `k = 0`).
    pub fn lens(k: i64) -> Self {
        Self::unknot(k, Role::Surgery)
    }

    /// A linear chain with consecutive components clasped.
    pub fn chain(framings: Vec<i64>, roles: Vec<Role>) -> Self {
        let edges = (1..framings.len()).map(|i| (i - 1, i, 1)).collect();
        SurgeryPresentation::ChainForest {
            framings,
            edges,
            roles,
        }
    }

    pub fn twisted_pair(linking: i64, framings: [i64; 2], roles: [Role; 2]) -> Self {
        SurgeryPresentation::TwistedPair {
            linking,
            framings,
            roles,
        }
    }

    pub fn disjoint_union(parts: Vec<SurgeryPresentation>) -> Self {
        SurgeryPresentation::DisjointUnion { parts }
    }

    /// Adds a split `±1`-framed surgery unknot (a blow-up).
    pub fn blow_up(&self, sign: i64) -> Self {
        Self::disjoint_union(vec![self.clone(), Self::lens(sign.signum())])
    }

    pub fn component_count(&self) -> usize {
        match self {
            SurgeryPresentation::ChainForest { roles, .. } => roles.len(),
            SurgeryPresentation::TwistedPair { .. } => 2,
            SurgeryPresentation::LinkingMatrix { roles, .. } => roles.len(),
            SurgeryPresentation::DisjointUnion { parts } => {
                parts.iter().map(|p| p.component_count()).sum()
            }
        }
    }

    /// Roles of all components in order.
    pub fn roles(&self) -> Vec<Role> {
        match self {
            SurgeryPresentation::ChainForest { roles, .. } => roles.clone(),
            SurgeryPresentation::TwistedPair { roles, .. } => roles.to_vec(),
            SurgeryPresentation::LinkingMatrix { roles, .. } => roles.clone(),
            SurgeryPresentation::DisjointUnion { parts } => {
                parts.iter().flat_map(|p| p.roles()).collect()
            }
        }
    }

    pub fn uses_linking_matrix(&self) -> bool {
        match self {
            SurgeryPresentation::LinkingMatrix { .. } => true,
            SurgeryPresentation::DisjointUnion { parts } => {
                parts.iter().any(|p| p.uses_linking_matrix())
            }
            _ => false,
        }
    }

    /// Largest banded color, if any component is banded.
    pub fn max_banded_color(&self) -> Option<u32> {
        self.roles()
            .into_iter()
            .filter_map(|r| match r {
                Role::Banded(c) => Some(c),
                Role::Surgery => None,
            })
            .max()
    }

    /// Linking matrix of the whole link, framings on the diagonal.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        match self {
            SurgeryPresentation::ChainForest {
                framings, edges, ..
            } => {
                let n = framings.len();
                let mut m = vec![vec![0; n]; n];
                for (i, f) in framings.iter().enumerate() {
                    m[i][i] = *f;
                }
                for &(i, j, l) in edges {
                    m[i][j] += l;
                    m[j][i] += l;
                }
                m
            }
            SurgeryPresentation::TwistedPair {
                linking, framings, ..
            } => vec![vec![framings[0], *linking], vec![*linking, framings[1]]],
            SurgeryPresentation::LinkingMatrix { matrix, .. } => matrix.clone(),
            SurgeryPresentation::DisjointUnion { parts } => {
                let n = self.component_count();
                let mut m = vec![vec![0; n]; n];
                let mut off = 0;
                for part in parts {
                    let b = part.linking_matrix();
                    for (i, row) in b.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            m[off + i][off + j] = *x;
                        }
                    }
                    off += b.len();
                }
                m
            }
        }
    }

    /// Linking matrix restricted to the surgery components.
    pub fn surgery_matrix(&self) -> Vec<Vec<i64>> {
        let full = self.linking_matrix();
        let idx: Vec<usize> = self
            .roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Role::Surgery)
            .map(|(i, _)| i)
            .collect();
        idx.iter()
            .map(|&i| idx.iter().map(|&j| full[i][j]).collect())
            .collect()
    }

    /// Checks structural validity; colors are checked against a theory elsewhere.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPresentation(m));
        match self {
            SurgeryPresentation::ChainForest {
                framings,
                edges,
                roles,
            } => {
                let n = framings.len();
                if roles.len() != n {
                    return bad(format!("{} framings but {} roles", n, roles.len()));
                }
                let mut parent: Vec<usize> = (0..n).collect();
                fn find(parent: &mut [usize], mut x: usize) -> usize {
                    while parent[x] != x {
                        parent[x] = parent[parent[x]];
                        x = parent[x];
                    }
                    x
                }
                for &(i, j, l) in edges {
                    if i >= n || j >= n || i == j {
                        return bad(format!("edge ({i}, {j}) is not between two components"));
                    }
                    if l.abs() != 1 {
                        return bad(format!("edge ({i}, {j}) has linking {l}, expected ±1"));
                    }
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a == b {
                        return bad(format!("edge ({i}, {j}) closes a cycle"));
                    }
                    parent[a] = b;
                }
                Ok(())
            }
            SurgeryPresentation::TwistedPair { .. } => Ok(()),
            SurgeryPresentation::LinkingMatrix { matrix, roles } => {
                let n = matrix.len();
                if roles.len() != n || matrix.iter().any(|r| r.len() != n) {
                    return bad("linking matrix must be square with one role per row".into());
                }
                if (0..n).any(|i| (0..n).any(|j| matrix[i][j] != matrix[j][i])) {
                    return bad("linking matrix must be symmetric".into());
                }
                Ok(())
            }
            SurgeryPresentation::DisjointUnion { parts } => {
                parts.iter().try_for_each(|p| p.validate())
            }
        }
    }
}
