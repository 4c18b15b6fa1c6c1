//! Maya diagrams on the half-integer lattice and their Young diagrams.

use crate::error::{Error, Result};

/// A half-integer: value = num/2 with num odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    num: i64,
}

impl HalfInt {
    pub fn new(num: i64) -> Result<Self> {
        if num % 2 == 0 {
            return Err(Error::Domain(format!(
                "HalfInt: {num}/2 is not a half-integer"
            )));
        }
        Ok(HalfInt { num })
    }

    /// Particle position for matrix row index m: m + 1/2.
    pub fn from_particle_index(m: usize) -> Self {
        HalfInt {
            num: 2 * m as i64 + 1,
        }
    }

    /// Hole position for matrix column index n: -(n + 1/2).
    pub fn from_hole_index(n: usize) -> Self {
        HalfInt {
            num: -(2 * n as i64 + 1),
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / 2.0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/2", self.num)
    }
}

/// Particle/hole configuration: particles on the positive half-integers,
/// holes on the negative ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MayaDiagram {
    particles: Vec<HalfInt>,
    holes: Vec<HalfInt>,
}

/// Weakly decreasing partition rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungDiagram {
    pub rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }
}

impl std::fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl MayaDiagram {
    pub fn new(mut particles: Vec<HalfInt>, mut holes: Vec<HalfInt>) -> Result<Self> {
        if particles.iter().any(|p| !p.is_positive()) {
            return Err(Error::Domain(
                "MayaDiagram: particle at non-positive position".into(),
            ));
        }
        if holes.iter().any(|h| h.is_positive()) {
            return Err(Error::Domain(
                "MayaDiagram: hole at positive position".into(),
            ));
        }
        particles.sort();
        holes.sort();
        particles.dedup();
        holes.dedup();
        Ok(MayaDiagram { particles, holes })
    }

    pub fn vacuum() -> Self {
        MayaDiagram {
            particles: vec![],
            holes: vec![],
        }
    }

    pub fn particles(&self) -> &[HalfInt] {
        &self.particles
    }

    pub fn holes(&self) -> &[HalfInt] {
        &self.holes
    }

    /// Only balanced diagrams contribute to the determinant expansion.
    pub fn balanced(&self) -> bool {
        self.particles.len() == self.holes.len()
    }

    /// Total number of marked positions |p| + |h| (= 2k when balanced).
    pub fn weight(&self) -> usize {
        self.particles.len() + self.holes.len()
    }

    /// Matrix row indices of the particles (position m + 1/2 -> m).
    pub fn particle_indices(&self) -> Vec<usize> {
        self.particles
            .iter()
            .map(|p| ((p.num - 1) / 2) as usize)
            .collect()
    }

    /// Matrix column indices of the holes (position -(n + 1/2) -> n),
    /// ascending.
    pub fn hole_indices(&self) -> Vec<usize> {
        self.holes
            .iter()
            .rev()
            .map(|h| ((-h.num - 1) / 2) as usize)
            .collect()
    }

    /// Path construction: reading positions upward, filled circles sit at
    /// (Z'_+ \ particles) union holes; every empty position contributes a
    /// row equal to the number of filled positions below it.
    pub fn to_young(&self) -> YoungDiagram {
        let filled_below = |x: i64| -> usize {
            // holes below x plus positive non-particles below x
            let holes_below = self.holes.iter().filter(|h| h.num < x).count();
            let positives_below = if x > 1 { ((x - 1) / 2) as usize } else { 0 };
            let particles_below = self.particles.iter().filter(|p| p.num < x).count();
            holes_below + positives_below - particles_below
        };
        let mut rows: Vec<usize> = Vec::new();
        // empty positions: the particles, and negative positions not in holes
        for p in &self.particles {
            let r = filled_below(p.num);
            if r > 0 {
                rows.push(r);
            }
        }
        let min_hole = self.holes.first().map(|h| h.num).unwrap_or(-1);
        let mut x = min_hole;
        while x < 0 {
            if !self.holes.iter().any(|h| h.num == x) {
                let r = filled_below(x);
                if r > 0 {
                    rows.push(r);
                }
            }
            x += 2;
        }
        rows.sort_unstable_by(|a, b| b.cmp(a));
        YoungDiagram { rows }
    }
}

impl std::fmt::Display for MayaDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p=[")?;
        for (i, p) in self.particles.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "] h=[")?;
        for (i, h) in self.holes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, "]")
    }
}

/// All k-subsets of 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // rightmost index that can still advance
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All balanced diagrams with |p| = |h| = k <= max_k and positions within
/// [-max_pos, max_pos].
pub fn enumerate_maya(max_k: usize, max_pos: HalfInt) -> Result<Vec<MayaDiagram>> {
    if max_k > 6 {
        return Err(Error::Domain(format!(
            "enumerate_maya: max_k = {max_k} > 6"
        )));
    }
    if max_pos.num > 21 || max_pos.num < 1 {
        return Err(Error::Domain(format!(
            "enumerate_maya: max_pos = {max_pos} outside (0, 21/2]"
        )));
    }
    let positions = ((max_pos.num + 1) / 2) as usize; // admissible per side
    let mut out = Vec::new();
    for k in 0..=max_k.min(positions) {
        for pset in combinations(positions, k) {
            for hset in combinations(positions, k) {
                let particles = pset
                    .iter()
                    .map(|&m| HalfInt::from_particle_index(m))
                    .collect();
                let holes = hset.iter().map(|&n| HalfInt::from_hole_index(n)).collect();
                out.push(MayaDiagram::new(particles, holes)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hi(n: i64) -> HalfInt {
        HalfInt::new(n).unwrap()
    }

    #[test]
    fn half_int_validation() {
        assert!(HalfInt::new(4).is_err());
        assert_eq!(hi(5).value(), 2.5);
        assert_eq!(HalfInt::from_particle_index(2), hi(5));
        assert_eq!(HalfInt::from_hole_index(1), hi(-3));
    }

    #[test]
    fn vacuum_maps_to_empty_partition() {
        assert_eq!(MayaDiagram::vacuum().to_young().rows, Vec::<usize>::new());
    }

    #[test]
    fn single_box() {
        let d = MayaDiagram::new(vec![hi(1)], vec![hi(-1)]).unwrap();
        assert_eq!(d.to_young().rows, vec![1]);
    }

    #[test]
    fn reference_example() {
        // particles {5/2}, holes {-5/2, -1/2} -> (4, 1)
        let d = MayaDiagram::new(vec![hi(5)], vec![hi(-5), hi(-1)]).unwrap();
        assert_eq!(d.to_young().rows, vec![4, 1]);
        assert!(!d.balanced());
    }

    #[test]
    fn staircase_example() {
        // particles {5/2}, holes {-5/2}: rows (3,1,1)
        let d = MayaDiagram::new(vec![hi(5)], vec![hi(-5)]).unwrap();
        assert_eq!(d.to_young().rows, vec![3, 1, 1]);
        assert!(d.balanced());
        assert_eq!(d.weight(), 2);
    }

    #[test]
    fn index_maps_round_trip() {
        let d = MayaDiagram::new(vec![hi(1), hi(7)], vec![hi(-3), hi(-5)]).unwrap();
        assert_eq!(d.particle_indices(), vec![0, 3]);
        assert_eq!(d.hole_indices(), vec![1, 2]);
    }

    #[test]
    fn enumeration_counts_match_binomials() {
        // count = sum_k C(P, k)^2
        let cases = [
            (0usize, 1i64, 1usize), // vacuum only
            (1, 3, 5),              // 1 + C(2,1)^2
            (2, 5, 19),             // 1 + 9 + 9
            (3, 5, 20),             // 1 + 9 + 9 + 1
        ];
        for &(max_k, num, expect) in &cases {
            let got = enumerate_maya(max_k, hi(num)).unwrap().len();
            assert_eq!(got, expect, "max_k={max_k} max_pos={num}/2");
        }
    }

    #[test]
    fn enumeration_guards() {
        assert!(enumerate_maya(7, hi(3)).is_err());
        assert!(enumerate_maya(2, hi(23)).is_err());
    }

    #[test]
    fn combinations_basic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(1, 2).is_empty());
    }
}
