//! Finite groups as validated multiplication tables.
//!
//! Elements are indices `0..order` with the identity fixed at index 0.
//! Construction checks the Latin-square property, associativity and
//! two-sided inverses, so every value of this type is a genuine group.

use crate::error::{Result, TcdsError};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub type GroupElement = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<GroupElement>>,
    inverse: Vec<GroupElement>,
}

impl FiniteGroup {
    /// Validates a multiplication table (row g, column h holds g·h).
    /// Index 0 must act as the identity.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<GroupElement>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(TcdsError::BadBuilder("empty multiplication table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(TcdsError::BadBuilder("multiplication table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(TcdsError::NotLatinSquare { row: 0, value: v });
                }
            }
        }
        for g in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for h in 0..n {
                let r = table[g][h];
                if seen_row[r] {
                    return Err(TcdsError::NotLatinSquare { row: g, value: r });
                }
                seen_row[r] = true;
                let c = table[h][g];
                if seen_col[c] {
                    return Err(TcdsError::NotLatinSquare { row: g, value: c });
                }
                seen_col[c] = true;
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(TcdsError::BadIdentity { witness: g });
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(TcdsError::NotAssociative { g, h, k });
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            let mut found = None;
            for h in 0..n {
                if table[g][h] == 0 && table[h][g] == 0 {
                    found = Some(h);
                    break;
                }
            }
            inverse[g] = found.ok_or(TcdsError::NoInverse { g })?;
        }
        Ok(Self { name: name.into(), table, inverse })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> GroupElement {
        0
    }

    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        self.table[g][h]
    }

    pub fn inv(&self, g: GroupElement) -> GroupElement {
        self.inverse[g]
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.table[g][h] == self.table[h][g]))
    }

    /// Z_n with element i representing the residue i.
    pub fn cyclic(n: usize) -> Arc<Self> {
        assert!(n > 0, "cyclic group needs positive order");
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Arc::new(Self::from_table(format!("Z{n}"), table).expect("cyclic table is a group"))
    }

    /// Direct product; (g1, g2) is encoded as g1·|G2| + g2.
    pub fn product(g1: &Self, g2: &Self) -> Arc<Self> {
        let n1 = g1.order();
        let n2 = g2.order();
        let n = n1 * n2;
        let enc = |a: usize, b: usize| a * n2 + b;
        let mut table = vec![vec![0usize; n]; n];
        for a1 in 0..n1 {
            for b1 in 0..n2 {
                for a2 in 0..n1 {
                    for b2 in 0..n2 {
                        table[enc(a1, b1)][enc(a2, b2)] = enc(g1.mul(a1, a2), g2.mul(b1, b2));
                    }
                }
            }
        }
        Arc::new(
            Self::from_table(format!("{}x{}", g1.name, g2.name), table)
                .expect("product table is a group"),
        )
    }

    /// Dihedral group of order 2n: r^i s^k encoded as k·n + i, with
    /// s r s⁻¹ = r⁻¹. For n = 3 this is the smallest nonabelian group.
    pub fn dihedral(n: usize) -> Arc<Self> {
        assert!(n > 0, "dihedral group needs positive rotation order");
        let order = 2 * n;
        let enc = |i: usize, k: usize| k * n + i;
        let mut table = vec![vec![0usize; order]; order];
        for i in 0..n {
            for k in 0..2 {
                for j in 0..n {
                    for l in 0..2 {
                        // (r^i s^k)(r^j s^l) = r^(i + (-1)^k j) s^(k+l)
                        let rot = if k == 0 { (i + j) % n } else { (i + n - j % n) % n };
                        table[enc(i, k)][enc(j, l)] = enc(rot, (k + l) % 2);
                    }
                }
            }
        }
        Arc::new(Self::from_table(format!("D{n}"), table).expect("dihedral table is a group"))
    }
}
