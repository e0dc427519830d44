//! Typed model of `uiautomator dump` view-hierarchy XML.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("malformed XML at {line}:{column}: {message}")]
    Xml {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("invalid {attribute} attribute {value:?} at {line}:{column}: {message}")]
    Attribute {
        attribute: &'static str,
        value: String,
        line: u32,
        column: u32,
        message: String,
    },
    #[error("unexpected document structure: {0}")]
    Structure(String),
    #[error("unsupported encoding: {0}")]
    Encoding(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Bounds {
    pub left: i32,
    pub top: i32,
    pub right: i32,
    pub bottom: i32,
}

impl Bounds {
    pub fn new(left: i32, top: i32, right: i32, bottom: i32) -> Option<Self> {
        (left <= right && top <= bottom).then_some(Self {
            left,
            top,
            right,
            bottom,
        })
    }

    /// Positive-area overlap.
    pub fn intersects(&self, other: &Bounds) -> bool {
        self.overlaps_horizontally(other) && self.top < other.bottom && other.top < self.bottom
    }

    pub fn overlaps_horizontally(&self, other: &Bounds) -> bool {
        self.left < other.right && other.left < self.right
    }

    pub fn width(&self) -> i32 {
        self.right - self.left
    }

    pub fn height(&self) -> i32 {
        self.bottom - self.top
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}][{},{}]",
            self.left, self.top, self.right, self.bottom
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct BoundsSyntaxError(String);

/// Parses the `[x1,y1][x2,y2]` bounds syntax.
pub fn parse_bounds(text: &str) -> Result<Bounds, BoundsSyntaxError> {
    fn pair(s: &str) -> Option<(i32, i32, &str)> {
        let s = s.strip_prefix('[')?;
        let (inner, rest) = s.split_once(']')?;
        let (a, b) = inner.split_once(',')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?, rest))
    }
    let syntax = || BoundsSyntaxError("expected [left,top][right,bottom]".to_string());
    let (left, top, rest) = pair(text.trim()).ok_or_else(syntax)?;
    let (right, bottom, rest) = pair(rest).ok_or_else(syntax)?;
    if !rest.is_empty() {
        return Err(syntax());
    }
    Bounds::new(left, top, right, bottom)
        .ok_or_else(|| BoundsSyntaxError("right/bottom edge precedes left/top edge".to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UiNode {
    pub class_name: String,
    pub resource_id: String,
    pub content_desc: String,
    pub focusable: bool,
    pub text: String,
    pub bounds: Bounds,
    pub index: i64,
    pub children: Vec<UiNode>,
    /// Attributes not modelled above (`clickable`, `package`, ...).
    pub extra: BTreeMap<String, String>,
}

impl UiNode {
    /// Preorder over this node and its descendants.
    pub fn walk(&self) -> Preorder<'_> {
        Preorder {
            stack: vec![(NodePath::default(), self)],
        }
    }

    pub fn has_text(&self) -> bool {
        !self.text.trim().is_empty()
    }

    pub fn has_content_desc(&self) -> bool {
        !self.content_desc.trim().is_empty()
    }

    /// Short class name: `android.view.ViewGroup` -> `ViewGroup`.
    pub fn simple_class(&self) -> &str {
        self.class_name.rsplit('.').next().unwrap_or("")
    }

    pub fn count(&self) -> usize {
        self.walk().count()
    }
}

/// Child indices from the hierarchy root down to a node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn child(&self, i: usize) -> NodePath {
        let mut steps = self.0.clone();
        steps.push(i);
        NodePath(steps)
    }

    /// True when `self` is a strict ancestor of `other`.
    pub fn is_ancestor_of(&self, other: &NodePath) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "/{}", steps.join("/"))
    }
}

pub struct Preorder<'a> {
    stack: Vec<(NodePath, &'a UiNode)>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = (NodePath, &'a UiNode);

    fn next(&mut self) -> Option<Self::Item> {
        let (path, node) = self.stack.pop()?;
        for (i, child) in node.children.iter().enumerate().rev() {
            self.stack.push((path.child(i), child));
        }
        Some((path, node))
    }
}

/// One parsed dump: the `<hierarchy>` element and its top-level nodes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Hierarchy {
    pub children: Vec<UiNode>,
    pub extra: BTreeMap<String, String>,
}

impl Hierarchy {
    /// Preorder over every node element, paths relative to the hierarchy.
    pub fn walk(&self) -> Preorder<'_> {
        Preorder {
            stack: self
                .children
                .iter()
                .enumerate()
                .rev()
                .map(|(i, c)| (NodePath(vec![i]), c))
                .collect(),
        }
    }

    pub fn nodes(&self) -> Vec<&UiNode> {
        self.walk().map(|(_, n)| n).collect()
    }

    pub fn node_at(&self, path: &NodePath) -> Option<&UiNode> {
        let (first, rest) = path.0.split_first()?;
        let mut node = self.children.get(*first)?;
        for &i in rest {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    pub fn len(&self) -> usize {
        self.walk().count()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    /// Canonical XML: known attributes in fixed order, two-space indent.
    pub fn to_canonical_xml(&self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        if self.children.is_empty() {
            out.push_str("<hierarchy/>\n");
            return out;
        }
        out.push_str("<hierarchy>\n");
        for child in &self.children {
            write_node(&mut out, child, 1);
        }
        out.push_str("</hierarchy>\n");
        out
    }
}

fn write_node(out: &mut String, node: &UiNode, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = write!(
        out,
        "{pad}<node index=\"{}\" text=\"{}\" resource-id=\"{}\" class=\"{}\" content-desc=\"{}\" focusable=\"{}\" bounds=\"{}\"",
        node.index,
        escape(&node.text),
        escape(&node.resource_id),
        escape(&node.class_name),
        escape(&node.content_desc),
        node.focusable,
        node.bounds,
    );
    if node.children.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");
    for child in &node.children {
        write_node(out, child, depth + 1);
    }
    let _ = writeln!(out, "{pad}</node>");
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

pub fn parse_dump_bytes(bytes: &[u8]) -> Result<Hierarchy, HierarchyError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| HierarchyError::Encoding(format!("dump is not valid UTF-8: {e}")))?;
    parse_dump(text)
}

pub fn parse_dump(xml: &str) -> Result<Hierarchy, HierarchyError> {
    check_declared_encoding(xml)?;
    let doc = roxmltree::Document::parse(xml).map_err(|e| {
        let pos = e.pos();
        HierarchyError::Xml {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "hierarchy" {
        return Err(HierarchyError::Structure(format!(
            "root element is <{}>, expected <hierarchy>",
            root.tag_name().name()
        )));
    }
    Ok(Hierarchy {
        children: parse_children(&doc, root)?,
        extra: root
            .attributes()
            .map(|a| (a.name().to_string(), a.value().to_string()))
            .collect(),
    })
}

fn check_declared_encoding(xml: &str) -> Result<(), HierarchyError> {
    let xml = xml.trim_start_matches('\u{feff}');
    let Some(decl) = xml
        .strip_prefix("<?xml")
        .and_then(|d| d.split_once("?>"))
        .map(|d| d.0)
    else {
        return Ok(());
    };
    let Some(at) = decl.find("encoding") else {
        return Ok(());
    };
    let value = decl[at + "encoding".len()..]
        .trim_start()
        .trim_start_matches('=')
        .trim_start();
    let quote = value.chars().next().unwrap_or('"');
    let name = value
        .trim_start_matches(quote)
        .split(quote)
        .next()
        .unwrap_or("");
    if name.eq_ignore_ascii_case("utf-8") || name.eq_ignore_ascii_case("utf8") {
        Ok(())
    } else {
        Err(HierarchyError::Encoding(format!(
            "declared encoding {name:?}; only UTF-8 dumps are supported"
        )))
    }
}

fn parse_children(
    doc: &roxmltree::Document<'_>,
    parent: roxmltree::Node<'_, '_>,
) -> Result<Vec<UiNode>, HierarchyError> {
    parent
        .children()
        .filter(|n| n.is_element())
        .map(|el| {
            if el.tag_name().name() != "node" {
                return Err(HierarchyError::Structure(format!(
                    "unexpected element <{}> at {}",
                    el.tag_name().name(),
                    doc.text_pos_at(el.range().start)
                )));
            }
            parse_node(doc, el)
        })
        .collect()
}

fn parse_node(
    doc: &roxmltree::Document<'_>,
    el: roxmltree::Node<'_, '_>,
) -> Result<UiNode, HierarchyError> {
    let mut node = UiNode::default();
    for attr in el.attributes() {
        let value = attr.value();
        let attr_error = |attribute: &'static str, message: String| {
            let pos = doc.text_pos_at(attr.range().start);
            HierarchyError::Attribute {
                attribute,
                value: value.to_string(),
                line: pos.row,
                column: pos.col,
                message,
            }
        };
        match attr.name() {
            "class" => node.class_name = value.to_string(),
            "resource-id" => node.resource_id = value.to_string(),
            "content-desc" => node.content_desc = value.to_string(),
            "text" => node.text = value.to_string(),
            "focusable" => node.focusable = value == "true",
            "bounds" => {
                node.bounds = parse_bounds(value).map_err(|e| attr_error("bounds", e.0))?;
            }
            "index" => {
                node.index = value
                    .trim()
                    .parse()
                    .map_err(|e: std::num::ParseIntError| attr_error("index", e.to_string()))?;
            }
            other => {
                node.extra.insert(other.to_string(), value.to_string());
            }
        }
    }
    node.children = parse_children(doc, el)?;
    Ok(node)
}
