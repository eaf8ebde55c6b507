use std::fmt;

/// Dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<bool>>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BitMatrix {
        BitMatrix {
            rows,
            cols,
            data: vec![vec![false; cols]; rows],
        }
    }

    /// Builds a matrix from 0/1 rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<u8>]) -> BitMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| r.iter().map(|&b| b & 1 == 1).collect()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[bool] {
        &self.data[r]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.data[r].iter().filter(|&&b| b).count()
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        (0..self.rows).map(|r| self.row_weight(r)).sum()
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst, "row added to itself");
        for c in 0..self.cols {
            if self.data[src][c] {
                self.data[dst][c] ^= true;
            }
        }
    }

    /// Weight of `row[dst] ^ row[src]` without modifying the matrix.
    pub fn xor_weight(&self, src: usize, dst: usize) -> usize {
        (0..self.cols).filter(|&c| self.data[src][c] != self.data[dst][c]).count()
    }

    /// Reduces to reduced row-echelon form using only row additions (no
    /// swaps), pivoting on the lowest available row. Returns the performed
    /// operations as `(src, dst)` pairs meaning `row[dst] ^= row[src]`.
    pub fn gauss_jordan(&mut self) -> Vec<(usize, usize)> {
        let mut ops = Vec::new();
        let mut pivoted = vec![false; self.rows];
        for c in 0..self.cols {
            let Some(p) = (0..self.rows).find(|&r| !pivoted[r] && self.data[r][c]) else {
                continue;
            };
            pivoted[p] = true;
            for r in 0..self.rows {
                if r != p && self.data[r][c] {
                    self.add_row(p, r);
                    ops.push((p, r));
                }
            }
        }
        ops
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.gauss_jordan();
        (0..m.rows).filter(|&r| m.row_weight(r) > 0).count()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            let line: String = r.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
