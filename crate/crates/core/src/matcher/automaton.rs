//! Aho-Corasick automaton over `char` sequences.
//!
//! Transitions are stored sparsely (sorted `(char, state)` runs in one flat
//! array) with a dense table for low code points at the root, where most
//! failure chains end.

use std::collections::VecDeque;

pub(crate) type StateId = u32;

const ROOT: StateId = 0;
const NONE: StateId = StateId::MAX;
const DENSE_ROOT: usize = 0x3000;

#[derive(Debug, Clone)]
pub(crate) struct Automaton {
    edge_start: Vec<u32>,
    edges: Vec<(char, StateId)>,
    fail: Vec<StateId>,
    /// Next state on the failure chain that has outputs.
    dict: Vec<StateId>,
    out_start: Vec<u32>,
    outputs: Vec<u32>,
    root_dense: Vec<StateId>,
}

#[derive(Debug)]
pub(crate) struct Builder {
    trans: Vec<Vec<(char, StateId)>>,
    outs: Vec<Vec<u32>>,
}

impl Builder {
    pub fn new() -> Self {
        Builder {
            trans: vec![Vec::new()],
            outs: vec![Vec::new()],
        }
    }

    /// Inserts a key; `pattern` is reported whenever the key is found.
    pub fn insert(&mut self, key: impl IntoIterator<Item = char>, pattern: u32) {
        let mut s = ROOT as usize;
        for c in key {
            let next = self.trans.len() as StateId;
            let edges = &mut self.trans[s];
            s = match edges.binary_search_by_key(&c, |e| e.0) {
                Ok(i) => edges[i].1 as usize,
                Err(i) => {
                    edges.insert(i, (c, next));
                    self.trans.push(Vec::new());
                    self.outs.push(Vec::new());
                    next as usize
                }
            };
        }
        self.outs[s].push(pattern);
    }

    pub fn build(self) -> Automaton {
        let n = self.trans.len();
        let goto = |s: usize, c: char| -> Option<StateId> {
            let edges = &self.trans[s];
            edges.binary_search_by_key(&c, |e| e.0).ok().map(|i| edges[i].1)
        };

        let mut fail = vec![ROOT; n];
        let mut dict = vec![NONE; n];
        let mut queue = VecDeque::new();
        for &(_, t) in &self.trans[ROOT as usize] {
            queue.push_back(t);
        }
        while let Some(s) = queue.pop_front() {
            let s = s as usize;
            for &(c, t) in &self.trans[s] {
                let mut f = fail[s] as usize;
                let target = loop {
                    if let Some(g) = goto(f, c) {
                        break g;
                    }
                    if f == ROOT as usize {
                        break ROOT;
                    }
                    f = fail[f] as usize;
                };
                let t = t as usize;
                fail[t] = target;
                let ft = target as usize;
                dict[t] = if self.outs[ft].is_empty() { dict[ft] } else { target };
                queue.push_back(t as StateId);
            }
        }

        let mut edge_start = Vec::with_capacity(n + 1);
        let mut edges = Vec::new();
        let mut out_start = Vec::with_capacity(n + 1);
        let mut outputs = Vec::new();
        for s in 0..n {
            edge_start.push(edges.len() as u32);
            edges.extend_from_slice(&self.trans[s]);
            out_start.push(outputs.len() as u32);
            outputs.extend_from_slice(&self.outs[s]);
        }
        edge_start.push(edges.len() as u32);
        out_start.push(outputs.len() as u32);

        let mut root_dense = vec![NONE; DENSE_ROOT];
        for &(c, t) in &self.trans[ROOT as usize] {
            if (c as usize) < DENSE_ROOT {
                root_dense[c as usize] = t;
            }
        }

        Automaton {
            edge_start,
            edges,
            fail,
            dict,
            out_start,
            outputs,
            root_dense,
        }
    }
}

impl Automaton {
    pub fn state_count(&self) -> usize {
        self.fail.len()
    }

    #[inline]
    fn goto(&self, s: StateId, c: char) -> Option<StateId> {
        if s == ROOT && (c as usize) < DENSE_ROOT {
            let t = self.root_dense[c as usize];
            return (t != NONE).then_some(t);
        }
        let lo = self.edge_start[s as usize] as usize;
        let hi = self.edge_start[s as usize + 1] as usize;
        let edges = &self.edges[lo..hi];
        if edges.len() <= 8 {
            edges.iter().find(|e| e.0 == c).map(|e| e.1)
        } else {
            edges.binary_search_by_key(&c, |e| e.0).ok().map(|i| edges[i].1)
        }
    }

    #[inline]
    pub fn start(&self) -> StateId {
        ROOT
    }

    #[inline]
    pub fn next(&self, mut s: StateId, c: char) -> StateId {
        loop {
            if let Some(t) = self.goto(s, c) {
                return t;
            }
            if s == ROOT {
                return ROOT;
            }
            s = self.fail[s as usize];
        }
    }

    fn own_outputs(&self, s: StateId) -> &[u32] {
        let lo = self.out_start[s as usize] as usize;
        let hi = self.out_start[s as usize + 1] as usize;
        &self.outputs[lo..hi]
    }

    #[inline]
    pub fn has_output(&self, s: StateId) -> bool {
        self.dict[s as usize] != NONE || self.out_start[s as usize] != self.out_start[s as usize + 1]
    }

    /// Every pattern whose key ends at state `s`, including shorter suffixes.
    #[inline]
    pub fn for_each_output(&self, s: StateId, mut f: impl FnMut(u32)) {
        let mut cur = s;
        while cur != NONE {
            for &p in self.own_outputs(cur) {
                f(p);
            }
            cur = self.dict[cur as usize];
        }
    }
}
