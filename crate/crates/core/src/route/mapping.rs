use serde::Serialize;

use super::RouteError;

/// Injective assignment of logical qubits to physical qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Mapping {
    l2p: Vec<usize>,
    p2l: Vec<Option<usize>>,
}

impl Mapping {
    /// Logical `i` on physical `i`.
    pub fn identity(num_logical: usize, num_physical: usize) -> Result<Mapping, RouteError> {
        Mapping::from_l2p((0..num_logical).collect(), num_physical)
    }

    pub fn from_l2p(l2p: Vec<usize>, num_physical: usize) -> Result<Mapping, RouteError> {
        if l2p.len() > num_physical {
            return Err(RouteError::TooManyQubits {
                logical: l2p.len(),
                physical: num_physical,
            });
        }
        let mut p2l = vec![None; num_physical];
        for (l, &p) in l2p.iter().enumerate() {
            if p >= num_physical || p2l[p].is_some() {
                return Err(RouteError::BadMapping(format!("logical {l} cannot go to physical {p}")));
            }
            p2l[p] = Some(l);
        }
        Ok(Mapping { l2p, p2l })
    }

    pub fn num_logical(&self) -> usize {
        self.l2p.len()
    }

    pub fn num_physical(&self) -> usize {
        self.p2l.len()
    }

    pub fn physical(&self, l: usize) -> usize {
        self.l2p[l]
    }

    pub fn logical(&self, p: usize) -> Option<usize> {
        self.p2l[p]
    }

    pub fn l2p(&self) -> &[usize] {
        &self.l2p
    }

    /// Exchanges whatever sits on physical qubits `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.p2l[a], self.p2l[b]);
        self.p2l[a] = lb;
        self.p2l[b] = la;
        if let Some(l) = la {
            self.l2p[l] = b;
        }
        if let Some(l) = lb {
            self.l2p[l] = a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_swaps() {
        let mut m = Mapping::identity(2, 4).unwrap();
        m.swap_physical(1, 3);
        assert_eq!(m.l2p(), &[0, 3]);
        assert_eq!(m.logical(1), None);
        assert_eq!(m.logical(3), Some(1));
        m.swap_physical(0, 3);
        assert_eq!(m.l2p(), &[3, 0]);
    }

    #[test]
    fn rejects_bad_assignments() {
        assert!(Mapping::identity(5, 4).is_err());
        assert!(Mapping::from_l2p(vec![1, 1], 3).is_err());
        assert!(Mapping::from_l2p(vec![0, 7], 3).is_err());
    }
}
