//! Concatenable queues: sequences stored in height-balanced (AVL) trees that
//! support insertion, deletion, split and concatenation in `O(log N)`.
//!
//! All queues live in one [`QueueArena`]. Elements are addressed by
//! [`Handle`]s that stay valid across splits and concatenations until the
//! element is removed. The root of each tree is the queue's root; it carries
//! an optional caller-defined annotation, and every node carries a summary of
//! its subtree computed by a [`Summarizer`].

use std::fmt::Debug;

use thiserror::Error;

const NIL: u32 = u32::MAX;

/// Per-subtree aggregate. `combine` must be associative.
pub trait Summarizer<T> {
    type Summary: Clone + Debug;
    fn leaf(item: &T) -> Self::Summary;
    fn combine(left: &Self::Summary, right: &Self::Summary) -> Self::Summary;
}

/// Summarizer that stores nothing.
#[derive(Debug)]
pub struct NoSummary;

impl<T> Summarizer<T> for NoSummary {
    type Summary = ();
    fn leaf(_: &T) {}
    fn combine(_: &(), _: &()) {}
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Handle {
    idx: u32,
    gen: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueueError {
    #[error("stale or foreign element handle {0:?}")]
    StaleHandle(Handle),
    #[error("cannot concatenate a queue with itself")]
    SameQueue,
}

pub type Result<T> = std::result::Result<T, QueueError>;

#[derive(Debug)]
struct Node<T, A, S> {
    item: Option<T>,
    left: u32,
    right: u32,
    parent: u32,
    height: u32,
    size: u32,
    summary: Option<S>,
    annot: Option<A>,
    gen: u32,
}

/// Work counters. `touched` counts node visits (rebalancing updates and
/// parent-link steps).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueueStats {
    pub ops: u64,
    pub touched: u64,
    pub last_op_touched: u64,
    pub max_op_touched: u64,
}

#[derive(Debug)]
pub struct QueueArena<T, A = (), S: Summarizer<T> = NoSummary> {
    nodes: Vec<Node<T, A, S::Summary>>,
    free: Vec<u32>,
    live: usize,
    op_start: u64,
    stats: QueueStats,
}

impl<T, A, S: Summarizer<T>> Default for QueueArena<T, A, S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T, A, S: Summarizer<T>> QueueArena<T, A, S> {
    pub fn new() -> Self {
        QueueArena { nodes: Vec::new(), free: Vec::new(), live: 0, op_start: 0, stats: QueueStats::default() }
    }

    pub fn stats(&self) -> QueueStats {
        self.stats
    }

    /// Number of live elements across all queues.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Allocated node slots (live plus free-listed).
    pub fn capacity_used(&self) -> usize {
        self.nodes.len()
    }

    fn begin(&mut self) {
        self.op_start = self.stats.touched;
    }

    fn end(&mut self) {
        self.stats.ops += 1;
        let t = self.stats.touched - self.op_start;
        self.stats.last_op_touched = t;
        self.stats.max_op_touched = self.stats.max_op_touched.max(t);
    }

    fn check(&self, h: Handle) -> Result<u32> {
        match self.nodes.get(h.idx as usize) {
            Some(n) if n.gen == h.gen && n.item.is_some() => Ok(h.idx),
            _ => Err(QueueError::StaleHandle(h)),
        }
    }

    fn handle(&self, idx: u32) -> Handle {
        Handle { idx, gen: self.nodes[idx as usize].gen }
    }

    pub fn is_valid(&self, h: Handle) -> bool {
        self.check(h).is_ok()
    }

    fn alloc(&mut self, item: T) -> u32 {
        let summary = S::leaf(&item);
        self.live += 1;
        if let Some(idx) = self.free.pop() {
            let n = &mut self.nodes[idx as usize];
            n.item = Some(item);
            n.left = NIL;
            n.right = NIL;
            n.parent = NIL;
            n.height = 1;
            n.size = 1;
            n.summary = Some(summary);
            n.annot = None;
            idx
        } else {
            self.nodes.push(Node {
                item: Some(item),
                left: NIL,
                right: NIL,
                parent: NIL,
                height: 1,
                size: 1,
                summary: Some(summary),
                annot: None,
                gen: 0,
            });
            (self.nodes.len() - 1) as u32
        }
    }

    fn release(&mut self, idx: u32) -> T {
        self.live -= 1;
        let n = &mut self.nodes[idx as usize];
        n.gen = n.gen.wrapping_add(1);
        n.summary = None;
        n.annot = None;
        self.free.push(idx);
        n.item.take().expect("released twice")
    }

    #[inline]
    fn n(&self, x: u32) -> &Node<T, A, S::Summary> {
        &self.nodes[x as usize]
    }

    #[inline]
    fn nm(&mut self, x: u32) -> &mut Node<T, A, S::Summary> {
        &mut self.nodes[x as usize]
    }

    #[inline]
    fn h(&self, x: u32) -> u32 {
        if x == NIL {
            0
        } else {
            self.n(x).height
        }
    }

    #[inline]
    fn sz(&self, x: u32) -> u32 {
        if x == NIL {
            0
        } else {
            self.n(x).size
        }
    }

    fn update(&mut self, x: u32) {
        self.stats.touched += 1;
        let (l, r) = (self.n(x).left, self.n(x).right);
        let height = 1 + self.h(l).max(self.h(r));
        let size = 1 + self.sz(l) + self.sz(r);
        let mut s = S::leaf(self.n(x).item.as_ref().expect("live node"));
        if l != NIL {
            s = S::combine(self.n(l).summary.as_ref().unwrap(), &s);
        }
        if r != NIL {
            s = S::combine(&s, self.n(r).summary.as_ref().unwrap());
        }
        let node = self.nm(x);
        node.height = height;
        node.size = size;
        node.summary = Some(s);
    }

    /// Make `x` the parent of `l` and `r`.
    fn node(&mut self, l: u32, x: u32, r: u32) -> u32 {
        {
            let n = self.nm(x);
            n.left = l;
            n.right = r;
            n.parent = NIL;
        }
        if l != NIL {
            self.nm(l).parent = x;
        }
        if r != NIL {
            self.nm(r).parent = x;
        }
        self.update(x);
        x
    }

    fn rotate_left(&mut self, x: u32) -> u32 {
        let y = self.n(x).right;
        let (xl, yl, yr) = (self.n(x).left, self.n(y).left, self.n(y).right);
        let x = self.node(xl, x, yl);
        self.node(x, y, yr)
    }

    fn rotate_right(&mut self, x: u32) -> u32 {
        let y = self.n(x).left;
        let (xr, yl, yr) = (self.n(x).right, self.n(y).left, self.n(y).right);
        let x = self.node(yr, x, xr);
        self.node(yl, y, x)
    }

    fn join_right(&mut self, l: u32, k: u32, r: u32) -> u32 {
        let (ll, c) = (self.n(l).left, self.n(l).right);
        if self.h(c) <= self.h(r) + 1 {
            let t = self.node(c, k, r);
            if self.h(t) <= self.h(ll) + 1 {
                self.node(ll, l, t)
            } else {
                let t = self.rotate_right(t);
                let l = self.node(ll, l, t);
                self.rotate_left(l)
            }
        } else {
            let t = self.join_right(c, k, r);
            let l2 = self.node(ll, l, t);
            if self.h(t) <= self.h(ll) + 1 {
                l2
            } else {
                self.rotate_left(l2)
            }
        }
    }

    fn join_left(&mut self, l: u32, k: u32, r: u32) -> u32 {
        let (c, rr) = (self.n(r).left, self.n(r).right);
        if self.h(c) <= self.h(l) + 1 {
            let t = self.node(l, k, c);
            if self.h(t) <= self.h(rr) + 1 {
                self.node(t, r, rr)
            } else {
                let t = self.rotate_left(t);
                let r = self.node(t, r, rr);
                self.rotate_right(r)
            }
        } else {
            let t = self.join_left(l, k, c);
            let r2 = self.node(t, r, rr);
            if self.h(t) <= self.h(rr) + 1 {
                r2
            } else {
                self.rotate_right(r2)
            }
        }
    }

    /// Join trees `l` and `r` (roots or NIL) with the detached node `k`
    /// between them.
    fn join(&mut self, l: u32, k: u32, r: u32) -> u32 {
        let (hl, hr) = (self.h(l), self.h(r));
        let root = if hl > hr + 1 {
            self.join_right(l, k, r)
        } else if hr > hl + 1 {
            self.join_left(l, k, r)
        } else {
            self.node(l, k, r)
        };
        self.nm(root).parent = NIL;
        root
    }

    /// Detach `x` from its tree, returning the trees of the elements before
    /// and after it.
    fn split_at(&mut self, x: u32) -> (u32, u32) {
        let (mut l, mut r) = (self.n(x).left, self.n(x).right);
        if l != NIL {
            self.nm(l).parent = NIL;
        }
        if r != NIL {
            self.nm(r).parent = NIL;
        }
        let mut cur = x;
        let mut p = self.n(x).parent;
        while p != NIL {
            self.stats.touched += 1;
            let next = self.n(p).parent;
            let (pl, pr) = (self.n(p).left, self.n(p).right);
            if pr == cur {
                if pl != NIL {
                    self.nm(pl).parent = NIL;
                }
                l = self.join(pl, p, l);
            } else {
                if pr != NIL {
                    self.nm(pr).parent = NIL;
                }
                r = self.join(r, p, pr);
            }
            cur = p;
            p = next;
        }
        self.node(NIL, x, NIL);
        (l, r)
    }

    fn leftmost(&mut self, mut x: u32) -> u32 {
        while self.n(x).left != NIL {
            self.stats.touched += 1;
            x = self.n(x).left;
        }
        x
    }

    fn rightmost(&mut self, mut x: u32) -> u32 {
        while self.n(x).right != NIL {
            self.stats.touched += 1;
            x = self.n(x).right;
        }
        x
    }

    fn join2(&mut self, l: u32, r: u32) -> u32 {
        if l == NIL {
            return r;
        }
        if r == NIL {
            return l;
        }
        let last = self.rightmost(l);
        let (l2, _) = self.split_at(last);
        self.join(l2, last, r)
    }

    fn root_idx(&mut self, mut x: u32) -> u32 {
        while self.n(x).parent != NIL {
            self.stats.touched += 1;
            x = self.n(x).parent;
        }
        x
    }

    fn take_annot(&mut self, x: u32) -> Option<A> {
        let r = self.root_idx(x);
        self.nm(r).annot.take()
    }

    fn opt(&self, x: u32) -> Option<Handle> {
        (x != NIL).then(|| self.handle(x))
    }

    fn build_balanced(&mut self, idxs: &[u32]) -> u32 {
        if idxs.is_empty() {
            return NIL;
        }
        let mid = idxs.len() / 2;
        let l = self.build_balanced(&idxs[..mid]);
        let r = self.build_balanced(&idxs[mid + 1..]);
        self.node(l, idxs[mid], r)
    }

    // ---- public operations ----

    /// A new single-element queue; the returned handle is both the element
    /// and the root.
    pub fn singleton(&mut self, item: T) -> Handle {
        let idx = self.alloc(item);
        self.handle(idx)
    }

    /// Build a queue from a sequence. Returns the root (if non-empty) and
    /// one handle per element in order.
    pub fn from_items<I: IntoIterator<Item = T>>(&mut self, items: I) -> (Option<Handle>, Vec<Handle>) {
        self.begin();
        let idxs: Vec<u32> = items.into_iter().map(|it| self.alloc(it)).collect();
        let root = self.build_balanced(&idxs);
        if root != NIL {
            self.nm(root).parent = NIL;
        }
        self.end();
        let handles = idxs.iter().map(|&i| self.handle(i)).collect();
        (self.opt(root), handles)
    }

    /// Root of the queue holding `h`.
    pub fn root(&mut self, h: Handle) -> Result<Handle> {
        let x = self.check(h)?;
        let r = self.root_idx(x);
        Ok(self.handle(r))
    }

    /// Number of parent links between `h` and its root.
    pub fn depth(&self, h: Handle) -> Result<usize> {
        let mut x = self.check(h)?;
        let mut d = 0;
        while self.n(x).parent != NIL {
            x = self.n(x).parent;
            d += 1;
        }
        Ok(d)
    }

    pub fn get(&self, h: Handle) -> Result<&T> {
        let x = self.check(h)?;
        Ok(self.n(x).item.as_ref().unwrap())
    }

    /// Mutate an element in place and refresh the summaries above it.
    pub fn modify<R>(&mut self, h: Handle, f: impl FnOnce(&mut T) -> R) -> Result<R> {
        let mut x = self.check(h)?;
        let out = f(self.nm(x).item.as_mut().unwrap());
        loop {
            self.update(x);
            let p = self.n(x).parent;
            if p == NIL {
                break;
            }
            x = p;
        }
        Ok(out)
    }

    pub fn annotation(&mut self, h: Handle) -> Result<Option<&A>> {
        let r = self.root(h)?;
        Ok(self.n(r.idx).annot.as_ref())
    }

    pub fn set_annotation(&mut self, h: Handle, a: Option<A>) -> Result<()> {
        let r = self.root(h)?;
        self.nm(r.idx).annot = a;
        Ok(())
    }

    /// Summary of the whole queue holding `h`.
    pub fn summary(&mut self, h: Handle) -> Result<&S::Summary> {
        let r = self.root(h)?;
        Ok(self.n(r.idx).summary.as_ref().unwrap())
    }

    pub fn queue_len(&mut self, h: Handle) -> Result<usize> {
        let r = self.root(h)?;
        Ok(self.n(r.idx).size as usize)
    }

    /// 0-based position of `h` in its queue.
    pub fn position(&self, h: Handle) -> Result<usize> {
        let mut x = self.check(h)?;
        let mut pos = self.sz(self.n(x).left) as usize;
        while self.n(x).parent != NIL {
            let p = self.n(x).parent;
            if self.n(p).right == x {
                pos += self.sz(self.n(p).left) as usize + 1;
            }
            x = p;
        }
        Ok(pos)
    }

    /// Insert `item` immediately after `h`; the queue keeps its annotation.
    pub fn insert_after(&mut self, h: Handle, item: T) -> Result<Handle> {
        let x = self.check(h)?;
        self.begin();
        let annot = self.take_annot(x);
        let k = self.alloc(item);
        let (l, r) = self.split_at(x);
        let l = self.join(l, x, NIL);
        let root = self.join(l, k, r);
        self.nm(root).annot = annot;
        self.end();
        Ok(self.handle(k))
    }

    /// Insert `item` immediately before `h`; the queue keeps its annotation.
    pub fn insert_before(&mut self, h: Handle, item: T) -> Result<Handle> {
        let x = self.check(h)?;
        self.begin();
        let annot = self.take_annot(x);
        let k = self.alloc(item);
        let (l, r) = self.split_at(x);
        let r = self.join(NIL, x, r);
        let root = self.join(l, k, r);
        self.nm(root).annot = annot;
        self.end();
        Ok(self.handle(k))
    }

    /// Append to the back of the queue holding `h`.
    pub fn push_back(&mut self, h: Handle, item: T) -> Result<Handle> {
        let x = self.check(h)?;
        let r = self.root_idx(x);
        let last = self.rightmost(r);
        let lh = self.handle(last);
        self.insert_after(lh, item)
    }

    /// Remove `h`. Returns the element and the root of what remains (which
    /// keeps the queue's annotation).
    pub fn remove(&mut self, h: Handle) -> Result<(T, Option<Handle>)> {
        let x = self.check(h)?;
        self.begin();
        let annot = self.take_annot(x);
        let (l, r) = self.split_at(x);
        let root = self.join2(l, r);
        if root != NIL {
            self.nm(root).annot = annot;
        }
        let item = self.release(x);
        self.end();
        Ok((item, self.opt(root)))
    }

    /// Split after `h`: the first queue ends with `h`. Both results start
    /// without annotation.
    pub fn split_after(&mut self, h: Handle) -> Result<(Handle, Option<Handle>)> {
        let x = self.check(h)?;
        self.begin();
        let _ = self.take_annot(x);
        let (l, r) = self.split_at(x);
        let l = self.join(l, x, NIL);
        self.end();
        Ok((self.handle(l), self.opt(r)))
    }

    /// Split before `h`: the second queue starts with `h`.
    pub fn split_before(&mut self, h: Handle) -> Result<(Option<Handle>, Handle)> {
        let x = self.check(h)?;
        self.begin();
        let _ = self.take_annot(x);
        let (l, r) = self.split_at(x);
        let r = self.join(NIL, x, r);
        self.end();
        Ok((self.opt(l), self.handle(r)))
    }

    /// Concatenate the queues holding `a` and `b` (in that order). The
    /// result keeps the first queue's annotation.
    pub fn concat(&mut self, a: Handle, b: Handle) -> Result<Handle> {
        let xa = self.check(a)?;
        let xb = self.check(b)?;
        self.begin();
        let ra = self.root_idx(xa);
        let rb = self.root_idx(xb);
        if ra == rb {
            self.end();
            return Err(QueueError::SameQueue);
        }
        let annot = self.nm(ra).annot.take();
        self.nm(rb).annot = None;
        let root = self.join2(ra, rb);
        self.nm(root).annot = annot;
        self.end();
        Ok(self.handle(root))
    }

    /// Concatenate possibly-empty queues.
    pub fn concat_opt(&mut self, a: Option<Handle>, b: Option<Handle>) -> Result<Option<Handle>> {
        match (a, b) {
            (Some(a), Some(b)) => self.concat(a, b).map(Some),
            (Some(a), None) => self.root(a).map(Some),
            (None, Some(b)) => self.root(b).map(Some),
            (None, None) => Ok(None),
        }
    }

    /// Rotate the cyclic sequence so that `h` becomes its last element.
    pub fn rotate_to_end(&mut self, h: Handle) -> Result<Handle> {
        let (l, r) = self.split_after(h)?;
        match r {
            Some(r) => self.concat(r, l),
            None => Ok(l),
        }
    }

    pub fn first(&mut self, h: Handle) -> Result<Handle> {
        let r = self.root(h)?;
        let x = self.leftmost(r.idx);
        Ok(self.handle(x))
    }

    pub fn last(&mut self, h: Handle) -> Result<Handle> {
        let r = self.root(h)?;
        let x = self.rightmost(r.idx);
        Ok(self.handle(x))
    }

    /// In-order successor within the same queue.
    pub fn next(&self, h: Handle) -> Result<Option<Handle>> {
        let mut x = self.check(h)?;
        if self.n(x).right != NIL {
            x = self.n(x).right;
            while self.n(x).left != NIL {
                x = self.n(x).left;
            }
            return Ok(Some(self.handle(x)));
        }
        loop {
            let p = self.n(x).parent;
            if p == NIL {
                return Ok(None);
            }
            if self.n(p).left == x {
                return Ok(Some(self.handle(p)));
            }
            x = p;
        }
    }

    pub fn prev(&self, h: Handle) -> Result<Option<Handle>> {
        let mut x = self.check(h)?;
        if self.n(x).left != NIL {
            x = self.n(x).left;
            while self.n(x).right != NIL {
                x = self.n(x).right;
            }
            return Ok(Some(self.handle(x)));
        }
        loop {
            let p = self.n(x).parent;
            if p == NIL {
                return Ok(None);
            }
            if self.n(p).right == x {
                return Ok(Some(self.handle(p)));
            }
            x = p;
        }
    }

    /// Cyclic successor: wraps from the last element to the first.
    pub fn cyclic_next(&mut self, h: Handle) -> Result<Handle> {
        match self.next(h)? {
            Some(n) => Ok(n),
            None => self.first(h),
        }
    }

    pub fn cyclic_prev(&mut self, h: Handle) -> Result<Handle> {
        match self.prev(h)? {
            Some(n) => Ok(n),
            None => self.last(h),
        }
    }

    /// Handles of the queue holding `h`, in order.
    pub fn handles(&self, h: Handle) -> Result<Vec<Handle>> {
        let mut x = self.check(h)?;
        while self.n(x).parent != NIL {
            x = self.n(x).parent;
        }
        let mut out = Vec::with_capacity(self.n(x).size as usize);
        let mut stack = Vec::new();
        let mut cur = x;
        while cur != NIL || !stack.is_empty() {
            while cur != NIL {
                stack.push(cur);
                cur = self.n(cur).left;
            }
            let top = stack.pop().unwrap();
            out.push(self.handle(top));
            cur = self.n(top).right;
        }
        Ok(out)
    }

    /// Elements of the queue holding `h`, in order.
    pub fn items(&self, h: Handle) -> Result<Vec<&T>> {
        Ok(self.handles(h)?.into_iter().map(|k| self.n(k.idx).item.as_ref().unwrap()).collect())
    }

    /// In-order elements whose own value passes `keep`, visiting only
    /// subtrees whose summary passes `enter`. With a summary that counts
    /// matching elements this costs `O(k log N)` for `k` matches.
    pub fn collect_where(
        &self,
        h: Handle,
        enter: impl Fn(&S::Summary) -> bool,
        keep: impl Fn(&T) -> bool,
    ) -> Result<Vec<Handle>> {
        let mut x = self.check(h)?;
        while self.n(x).parent != NIL {
            x = self.n(x).parent;
        }
        let mut out = Vec::new();
        self.collect_rec(x, &enter, &keep, &mut out);
        Ok(out)
    }

    fn collect_rec(
        &self,
        x: u32,
        enter: &impl Fn(&S::Summary) -> bool,
        keep: &impl Fn(&T) -> bool,
        out: &mut Vec<Handle>,
    ) {
        if x == NIL || !enter(self.n(x).summary.as_ref().unwrap()) {
            return;
        }
        let (l, r) = (self.n(x).left, self.n(x).right);
        self.collect_rec(l, enter, keep, out);
        if keep(self.n(x).item.as_ref().unwrap()) {
            out.push(self.handle(x));
        }
        self.collect_rec(r, enter, keep, out);
    }

    /// Check AVL balance, parent links, sizes. Test support.
    pub fn validate(&self, h: Handle) -> Result<bool> {
        let mut x = self.check(h)?;
        while self.n(x).parent != NIL {
            x = self.n(x).parent;
        }
        Ok(self.validate_rec(x).is_some())
    }

    fn validate_rec(&self, x: u32) -> Option<(u32, u32)> {
        if x == NIL {
            return Some((0, 0));
        }
        let n = self.n(x);
        for c in [n.left, n.right] {
            if c != NIL && self.n(c).parent != x {
                return None;
            }
        }
        let (hl, sl) = self.validate_rec(n.left)?;
        let (hr, sr) = self.validate_rec(n.right)?;
        if hl.abs_diff(hr) > 1 || n.height != 1 + hl.max(hr) || n.size != 1 + sl + sr {
            return None;
        }
        Some((n.height, n.size))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = QueueArena<char, &'static str>;

    fn seq(q: &Q, h: Handle) -> String {
        q.items(h).unwrap().into_iter().collect()
    }

    #[test]
    fn insert_examples() {
        let mut q = Q::new();
        let (root, hs) = q.from_items("ac".chars());
        let _ = root.unwrap();
        q.insert_before(hs[1], 'b').unwrap();
        assert_eq!(seq(&q, hs[0]), "abc");

        let mut q = Q::new();
        let a = q.singleton('a');
        assert_eq!(seq(&q, a), "a");
        q.insert_after(a, 'b').unwrap();
        assert_eq!(seq(&q, a), "ab");
    }

    #[test]
    fn delete_examples() {
        let mut q = Q::new();
        let (_, hs) = q.from_items("abc".chars());
        let (b, rest) = q.remove(hs[1]).unwrap();
        assert_eq!(b, 'b');
        assert_eq!(seq(&q, rest.unwrap()), "ac");

        let mut q = Q::new();
        let a = q.singleton('a');
        let (_, rest) = q.remove(a).unwrap();
        assert!(rest.is_none());
        assert_eq!(q.remove(a), Err(QueueError::StaleHandle(a)));
        let a2 = q.singleton('a');
        assert_ne!(a, a2);
    }

    #[test]
    fn split_and_concat_examples() {
        let mut q = Q::new();
        let (_, hs) = q.from_items("abcd".chars());
        let (l, r) = q.split_after(hs[1]).unwrap();
        assert_eq!(seq(&q, l), "ab");
        assert_eq!(seq(&q, r.unwrap()), "cd");
        let j = q.concat(l, r.unwrap()).unwrap();
        assert_eq!(seq(&q, j), "abcd");

        let (l, r) = q.split_after(hs[3]).unwrap();
        assert_eq!(seq(&q, l), "abcd");
        assert!(r.is_none());

        assert_eq!(q.concat(hs[0], hs[2]), Err(QueueError::SameQueue));
    }

    #[test]
    fn concat_with_empty_and_associativity() {
        let mut q = Q::new();
        let a = q.singleton('a');
        let r = q.concat_opt(None, Some(a)).unwrap().unwrap();
        assert_eq!(seq(&q, r), "a");
        let b = q.singleton('b');
        let c = q.singleton('c');
        let ab = q.concat(a, b).unwrap();
        let abc = q.concat(ab, c).unwrap();
        let s1 = seq(&q, abc);
        let mut q2 = Q::new();
        let a = q2.singleton('a');
        let b = q2.singleton('b');
        let c = q2.singleton('c');
        let bc = q2.concat(b, c).unwrap();
        let abc2 = q2.concat(a, bc).unwrap();
        assert_eq!(s1, seq(&q2, abc2));
    }

    #[test]
    fn annotation_follows_root() {
        let mut q = Q::new();
        let (root, hs) = q.from_items("abcdefgh".chars());
        q.set_annotation(root.unwrap(), Some("x")).unwrap();
        for c in "ijklmnop".chars() {
            q.push_back(hs[0], c).unwrap();
        }
        q.remove(hs[3]).unwrap();
        assert_eq!(q.annotation(hs[0]).unwrap(), Some(&"x"));
        let r = q.rotate_to_end(hs[5]).unwrap();
        assert_eq!(seq(&q, r), "ghijklmnopabcef");
    }

    #[test]
    fn cyclic_navigation() {
        let mut q = Q::new();
        let (_, hs) = q.from_items("abc".chars());
        assert_eq!(q.cyclic_next(hs[2]).unwrap(), hs[0]);
        assert_eq!(q.cyclic_prev(hs[0]).unwrap(), hs[2]);
        assert_eq!(q.position(hs[2]).unwrap(), 2);
    }

    struct Count;
    impl Summarizer<u32> for Count {
        type Summary = u32;
        fn leaf(x: &u32) -> u32 {
            u32::from(x.is_multiple_of(3))
        }
        fn combine(a: &u32, b: &u32) -> u32 {
            a + b
        }
    }

    #[test]
    fn summaries_guide_filtered_walks() {
        let mut q: QueueArena<u32, (), Count> = QueueArena::new();
        let (root, hs) = q.from_items(0..100);
        let root = root.unwrap();
        assert_eq!(*q.summary(root).unwrap(), 34);
        let found = q.collect_where(root, |s| *s > 0, |x| x % 3 == 0).unwrap();
        assert_eq!(found.len(), 34);
        q.modify(hs[0], |x| *x = 1).unwrap();
        assert_eq!(*q.summary(hs[50]).unwrap(), 33);
    }
}
