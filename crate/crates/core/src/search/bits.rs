/// Fixed-width bitset over up to 256 set indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Bits(pub [u64; 4]);

pub(crate) const CAPACITY: usize = 256;

impl Bits {
    pub const EMPTY: Bits = Bits([0; 4]);

    pub fn full(len: usize) -> Bits {
        let mut b = Bits::EMPTY;
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn and(&self, o: &Bits) -> Bits {
        Bits([self.0[0] & o.0[0], self.0[1] & o.0[1], self.0[2] & o.0[2], self.0[3] & o.0[3]])
    }

    #[inline]
    pub fn and_not(&self, o: &Bits) -> Bits {
        Bits([self.0[0] & !o.0[0], self.0[1] & !o.0[1], self.0[2] & !o.0[2], self.0[3] & !o.0[3]])
    }

    #[inline]
    pub fn intersects(&self, o: &Bits) -> bool {
        (self.0[0] & o.0[0]) | (self.0[1] & o.0[1]) | (self.0[2] & o.0[2]) | (self.0[3] & o.0[3]) != 0
    }

    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// The only element, if there is exactly one.
    #[inline]
    pub fn single(&self) -> Option<usize> {
        (self.len() == 1).then(|| self.first().expect("nonempty"))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut b = Bits::EMPTY;
        for i in [0, 63, 64, 200, 255] {
            b.insert(i);
        }
        assert_eq!(b.len(), 5);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 200, 255]);
        assert_eq!(b.first(), Some(0));
        b.remove(0);
        assert_eq!(b.first(), Some(63));
        assert!(b.contains(200) && !b.contains(199));
        let f = Bits::full(130);
        assert_eq!(f.len(), 130);
        assert_eq!(f.and(&b).len(), 2);
        assert_eq!(f.and_not(&b).len(), 128);
        assert!(f.intersects(&b));
        let mut one = Bits::EMPTY;
        one.insert(77);
        assert_eq!(one.single(), Some(77));
        assert_eq!(b.single(), None);
    }
}
