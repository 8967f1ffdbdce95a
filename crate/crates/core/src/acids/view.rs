//! Doubly linked subset of `0..len` kept in increasing order.

pub const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct ActiveList {
    next: Vec<u32>,
    prev: Vec<u32>,
    linked: Vec<bool>,
    head: u32,
    tail: u32,
    len: usize,
}

impl ActiveList {
    /// Links every `i < len` with `member(i)`.
    pub fn new(len: usize, mut member: impl FnMut(usize) -> bool) -> Self {
        let mut list = ActiveList {
            next: vec![NONE; len],
            prev: vec![NONE; len],
            linked: vec![false; len],
            head: NONE,
            tail: NONE,
            len: 0,
        };
        for i in 0..len {
            if member(i) {
                let idx = i as u32;
                list.linked[i] = true;
                list.prev[i] = list.tail;
                if list.tail == NONE {
                    list.head = idx;
                } else {
                    list.next[list.tail as usize] = idx;
                }
                list.tail = idx;
                list.len += 1;
            }
        }
        list
    }

    #[inline]
    pub fn is_linked(&self, i: usize) -> bool {
        self.linked[i]
    }

    #[inline]
    pub fn next(&self, i: usize) -> u32 {
        self.next[i]
    }

    #[inline]
    pub fn prev(&self, i: usize) -> u32 {
        self.prev[i]
    }

    pub fn head(&self) -> u32 {
        self.head
    }

    pub fn tail(&self) -> u32 {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Splices `i` out in O(1).
    pub fn unlink(&mut self, i: usize) {
        assert!(self.linked[i], "value {i} is not linked");
        let (p, n) = (self.prev[i], self.next[i]);
        if p == NONE {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NONE {
            self.tail = p;
        } else {
            self.prev[n as usize] = p;
        }
        self.linked[i] = false;
        self.next[i] = NONE;
        self.prev[i] = NONE;
        self.len -= 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            (cur != NONE).then(|| {
                let i = cur as usize;
                cur = self.next[i];
                i
            })
        })
    }
}
