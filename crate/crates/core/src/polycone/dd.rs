//! Double description: generators of `{x : a·x >= 0 for all a}` over the integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactlin::primitive_int;

pub(crate) type IVec = Vec<BigInt>;

pub(crate) fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn comb(ca: &BigInt, a: &[BigInt], cb: &BigInt, b: &[BigInt]) -> IVec {
    primitive_int(&a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &BitSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

/// `lineality` is a basis of the largest subspace in the cone; `rays` are the
/// extreme rays of the cone modulo that subspace.
#[derive(Clone, Debug)]
pub(crate) struct Dd {
    pub lineality: Vec<IVec>,
    pub rays: Vec<IVec>,
}

pub(crate) fn dd(ineqs: &[IVec], dim: usize) -> Dd {
    let m = ineqs.len();
    let mut lin: Vec<IVec> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut rays: Vec<(IVec, BitSet)> = Vec::new();
    for (t, a) in ineqs.iter().enumerate() {
        if a.iter().all(Zero::is_zero) {
            for r in rays.iter_mut() {
                r.1.insert(t);
            }
            continue;
        }
        if let Some(p) = lin.iter().position(|l| !idot(a, l).is_zero()) {
            let mut l0 = lin.swap_remove(p);
            let mut al0 = idot(a, &l0);
            if al0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                al0 = -al0;
            }
            for l in lin.iter_mut() {
                let al = idot(a, l);
                if !al.is_zero() {
                    *l = comb(&al0, l, &-al, &l0);
                }
            }
            for (r, z) in rays.iter_mut() {
                let ar = idot(a, r);
                if !ar.is_zero() {
                    *r = comb(&al0, r, &-ar, &l0);
                }
                z.insert(t);
            }
            let mut z0 = BitSet::new(m);
            for s in 0..t {
                z0.insert(s);
            }
            rays.push((primitive_int(&l0), z0));
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| idot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut new_rays: Vec<(IVec, BitSet)> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].1.and(&rays[n].1);
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == n || !common.subset_of(&rays[r].1));
                if adjacent {
                    let v = comb(&vals[p], &rays[n].0, &-vals[n].clone(), &rays[p].0);
                    let mut z = common;
                    z.insert(t);
                    new_rays.push((v, z));
                }
            }
        }
        let mut kept: Vec<(IVec, BitSet)> = Vec::new();
        for (i, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                z.insert(t);
            }
            kept.push((r, z));
        }
        kept.extend(new_rays);
        rays = kept;
    }
    Dd {
        lineality: lin.into_iter().map(|l| primitive_int(&l)).collect(),
        rays: rays.into_iter().map(|(r, _)| r).collect(),
    }
}
