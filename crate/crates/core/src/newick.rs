//! Newick input and output.
//!
//! Accepted grammar, with whitespace allowed between tokens:
//!
//! ```text
//! tree    := subtree ";"
//! subtree := label | "(" subtree ("," subtree)* ")" [label]
//! label   := [A-Za-z0-9_.|-]+
//! ```
//!
//! Branch lengths, quoted labels and comments are rejected. Node ids are
//! assigned in document preorder starting from 0.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tree::{is_label_char, ATree, Label, NodeId, RawTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn syntax(position: usize, message: impl Into<String>) -> NewickError {
    NewickError::Syntax {
        position,
        message: message.into(),
    }
}

fn unexpected(position: usize, c: Option<char>, expected: &str) -> NewickError {
    match c {
        None => syntax(position, format!("unexpected end of input, expected {expected}")),
        Some(':') => syntax(position, "branch lengths are not supported"),
        Some('\'') | Some('"') => syntax(position, "quoted labels are not supported"),
        Some('[') => syntax(position, "comments are not supported"),
        Some(c) => syntax(position, format!("unexpected {c:?}, expected {expected}")),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    /// Reads a possibly empty label token.
    fn token(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !is_label_char(c) {
                break;
            }
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn label(&mut self) -> Option<Label> {
        let tok = self.token();
        (!tok.is_empty()).then(|| Label::new(tok).expect("token chars are valid"))
    }
}

/// Parses every `;`-terminated tree in `text`, in order.
pub fn parse_newick(text: &str) -> Result<Vec<ATree>, NewickError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut trees = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            return Ok(trees);
        }
        trees.push(parse_one(&mut cur)?);
    }
}

fn parse_one(cur: &mut Cursor<'_>) -> Result<ATree, NewickError> {
    let mut raw = RawTree::new();
    let mut open: Vec<NodeId> = Vec::new();
    let new_node = |raw: &mut RawTree, open: &[NodeId], label| {
        let v = raw.add_node(label);
        match open.last() {
            Some(&p) => raw.attach(p, v),
            None => raw.root = Some(v),
        }
        v
    };
    'subtree: loop {
        // At the start of a subtree.
        cur.skip_ws();
        if cur.peek() == Some('(') {
            let v = new_node(&mut raw, &open, None);
            open.push(v);
            cur.bump();
            continue 'subtree;
        }
        let label = cur.label();
        new_node(&mut raw, &open, label);
        // After a complete subtree.
        loop {
            cur.skip_ws();
            let Some(&group) = open.last() else {
                return match cur.peek() {
                    Some(';') => {
                        cur.bump();
                        Ok(raw.finish()?)
                    }
                    c => Err(unexpected(cur.pos, c, "';'")),
                };
            };
            match cur.peek() {
                Some(',') => {
                    cur.bump();
                    continue 'subtree;
                }
                Some(')') => {
                    cur.bump();
                    open.pop();
                    cur.skip_ws();
                    let label = cur.label();
                    raw.set_label(group, label);
                }
                c => return Err(unexpected(cur.pos, c, "',' or ')'")),
            }
        }
    }
}

/// Per node, its children sorted by the smallest label of their cluster.
fn canonical_children(tree: &ATree) -> BTreeMap<NodeId, Vec<NodeId>> {
    let key = tree.min_labels();
    tree.preorder()
        .iter()
        .map(|&v| {
            let mut cs = tree.children_of(v).to_vec();
            cs.sort_by(|a, b| key[a.index()].cmp(&key[b.index()]));
            (v, cs)
        })
        .collect()
}

/// Writes `tree` in canonical form: children ordered by the smallest label
/// in their cluster. Equal trees give equal strings.
pub fn serialize_newick(tree: &ATree) -> Result<String, TreeError> {
    let root = tree.root().ok_or(TreeError::EmptyTree)?;
    let children = canonical_children(tree);
    enum Step {
        Enter(NodeId),
        Close(NodeId),
        Comma,
    }
    let mut out = String::new();
    let mut stack = vec![Step::Enter(root)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(v) => {
                let cs = &children[&v];
                if cs.is_empty() {
                    if let Some(l) = tree.label_of(v) {
                        out.push_str(l.as_str());
                    }
                    continue;
                }
                out.push('(');
                stack.push(Step::Close(v));
                for (i, &c) in cs.iter().enumerate().rev() {
                    stack.push(Step::Enter(c));
                    if i > 0 {
                        stack.push(Step::Comma);
                    }
                }
            }
            Step::Close(v) => {
                out.push(')');
                if let Some(l) = tree.label_of(v) {
                    out.push_str(l.as_str());
                }
            }
            Step::Comma => out.push(','),
        }
    }
    out.push(';');
    Ok(out)
}

/// Which child order a node path refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildOrder {
    /// The order children were stored in, i.e. document order for parsed trees.
    Stored,
    /// The order used by [`serialize_newick`].
    Canonical,
}

/// Root-to-node child-index paths such as `/`, `/0`, `/1/0`.
pub fn node_paths(tree: &ATree, order: ChildOrder) -> BTreeMap<NodeId, String> {
    let mut paths = BTreeMap::new();
    let Some(root) = tree.root() else {
        return paths;
    };
    let canonical = (order == ChildOrder::Canonical).then(|| canonical_children(tree));
    paths.insert(root, "/".to_string());
    for &v in tree.preorder() {
        let cs = match &canonical {
            Some(map) => map[&v].as_slice(),
            None => tree.children_of(v),
        };
        let base = paths[&v].clone();
        for (i, &c) in cs.iter().enumerate() {
            let p = if base == "/" {
                format!("/{i}")
            } else {
                format!("{base}/{i}")
            };
            paths.insert(c, p);
        }
    }
    paths
}
