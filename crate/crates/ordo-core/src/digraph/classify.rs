use serde::{Deserialize, Serialize};

use super::{is_acyclic_subset, Digraph};

/// Arc families a designated arc subset can be required to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcFamilyKind {
    InBranching,
    InArborescence,
    Matching,
    PerfectMatching,
    DisjointDipaths,
    Dipath,
    HamiltonianDipath,
    Acyclic,
}

impl ArcFamilyKind {
    pub const ALL: [ArcFamilyKind; 8] = [
        Self::InBranching,
        Self::InArborescence,
        Self::Matching,
        Self::PerfectMatching,
        Self::DisjointDipaths,
        Self::Dipath,
        Self::HamiltonianDipath,
        Self::Acyclic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::InBranching => "in-branching",
            Self::InArborescence => "in-arborescence",
            Self::Matching => "matching",
            Self::PerfectMatching => "perfect-matching",
            Self::DisjointDipaths => "disjoint-dipaths",
            Self::Dipath => "dipath",
            Self::HamiltonianDipath => "hamiltonian-dipath",
            Self::Acyclic => "acyclic",
        }
    }

    /// Subsets of a member are members.
    pub fn is_downward_closed(self) -> bool {
        matches!(
            self,
            Self::InBranching | Self::Matching | Self::DisjointDipaths | Self::Acyclic
        )
    }
}

impl std::str::FromStr for ArcFamilyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown arc family `{s}`"))
    }
}

impl std::fmt::Display for ArcFamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("arc index {index} out of range for {m} arcs")]
pub struct ClassifyError {
    pub index: usize,
    pub m: usize,
}

/// Whether the arcs `arc_idx` (a set; repeats are ignored) form a member of `kind`.
pub fn classify_arc_set(
    d: &Digraph,
    arc_idx: &[usize],
    kind: ArcFamilyKind,
) -> Result<bool, ClassifyError> {
    let mut active = vec![false; d.m()];
    for &i in arc_idx {
        if i >= d.m() {
            return Err(ClassifyError { index: i, m: d.m() });
        }
        active[i] = true;
    }
    Ok(classify_mask(d, &active, kind))
}

pub(crate) fn classify_mask(d: &Digraph, active: &[bool], kind: ArcFamilyKind) -> bool {
    let n = d.n();
    let mut outdeg = vec![0usize; n];
    let mut indeg = vec![0usize; n];
    let mut size = 0;
    for (i, a) in d.arcs().iter().enumerate() {
        if active[i] {
            outdeg[a.tail] += 1;
            indeg[a.head] += 1;
            size += 1;
        }
    }
    let branching = || outdeg.iter().all(|&x| x <= 1) && is_acyclic_subset(d, active);
    let paths = || {
        outdeg.iter().zip(&indeg).all(|(&o, &i)| o <= 1 && i <= 1) && is_acyclic_subset(d, active)
    };
    let matching = || (0..n).all(|v| outdeg[v] + indeg[v] <= 1);
    // In a disjoint union of dipaths, components with arcs = vertices with (in 0, out 1).
    let path_starts = || (0..n).filter(|&v| outdeg[v] == 1 && indeg[v] == 0).count();
    match kind {
        ArcFamilyKind::Acyclic => is_acyclic_subset(d, active),
        ArcFamilyKind::InBranching => branching(),
        ArcFamilyKind::InArborescence => {
            branching() && (n == 0 && size == 0 || n > 0 && size == n - 1)
        }
        ArcFamilyKind::Matching => matching(),
        ArcFamilyKind::PerfectMatching => {
            matching() && (0..n).all(|v| outdeg[v] + indeg[v] == 1)
        }
        ArcFamilyKind::DisjointDipaths => paths(),
        ArcFamilyKind::Dipath => paths() && path_starts() <= 1,
        ArcFamilyKind::HamiltonianDipath => {
            paths() && path_starts() <= 1 && (n == 0 && size == 0 || n > 0 && size == n - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ArcFamilyKind::*;

    #[test]
    fn matching_and_perfect_matching() {
        let d = Digraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(classify_arc_set(&d, &[0, 1], Matching).unwrap());
        assert!(classify_arc_set(&d, &[0, 1], PerfectMatching).unwrap());
        assert!(!classify_arc_set(&d, &[0], PerfectMatching).unwrap());
    }

    #[test]
    fn branching_rejects_outdegree_two() {
        let d = Digraph::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(!classify_arc_set(&d, &[0, 1], InBranching).unwrap());
        assert!(classify_arc_set(&d, &[0], InBranching).unwrap());
    }

    #[test]
    fn parallel_pair_is_not_a_matching() {
        let d = Digraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(!classify_arc_set(&d, &[0, 1], Matching).unwrap());
        assert!(classify_arc_set(&d, &[0], PerfectMatching).unwrap());
    }

    #[test]
    fn arborescence_spans_with_one_root() {
        let d = Digraph::from_pairs(4, &[(1, 0), (2, 0), (3, 2), (3, 1)]).unwrap();
        assert!(classify_arc_set(&d, &[0, 1, 2], InArborescence).unwrap());
        assert!(!classify_arc_set(&d, &[0, 1], InArborescence).unwrap());
        assert!(classify_arc_set(&d, &[0, 1], InBranching).unwrap());
    }

    #[test]
    fn dipath_kinds() {
        let d = Digraph::from_pairs(4, &[(2, 1), (1, 0), (3, 2), (0, 3)]).unwrap();
        assert!(classify_arc_set(&d, &[0, 1, 2], HamiltonianDipath).unwrap());
        assert!(classify_arc_set(&d, &[0, 1], Dipath).unwrap());
        assert!(!classify_arc_set(&d, &[0, 1, 2, 3], DisjointDipaths).unwrap());
        assert!(classify_arc_set(&d, &[], Dipath).unwrap());
        let two = Digraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!classify_arc_set(&two, &[0, 1], Dipath).unwrap());
        assert!(classify_arc_set(&two, &[0, 1], DisjointDipaths).unwrap());
    }

    #[test]
    fn index_out_of_range() {
        let d = Digraph::empty(2);
        assert_eq!(classify_arc_set(&d, &[0], Acyclic), Err(ClassifyError { index: 0, m: 0 }));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ArcFamilyKind::ALL {
            assert_eq!(k.name().parse::<ArcFamilyKind>().unwrap(), k);
        }
    }
}
