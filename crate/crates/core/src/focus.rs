//! Offline screen-reader walk: which nodes receive focus, and what is spoken
//! when each one does.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptors::{ChartData, ChartSettings};
use crate::hierarchy::{Hierarchy, NodePath, UiNode};
use crate::text::{Descriptor, DomainError};

/// Spoken for a focusable node that has nothing else to say.
pub const UNLABELED: &str = "unlabeled element";

#[derive(Debug, Error)]
pub enum FocusError {
    #[error("resource-id {0:?} is already bound")]
    DuplicateBinding(String),
    #[error("cannot bind an empty resource-id")]
    EmptyResourceId,
    #[error("registry JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("registry entry {id:?}: {source}")]
    Entry { id: String, source: DomainError },
    #[error("node {0} has nothing to speak")]
    NotSpeakable(NodePath),
}

/// Descriptors attached to chart nodes, keyed by exact resource-id.
#[derive(Clone, Default)]
pub struct DescriptorRegistry {
    bindings: BTreeMap<String, Arc<dyn Descriptor>>,
}

impl fmt::Debug for DescriptorRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bindings.keys()).finish()
    }
}

impl DescriptorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(
        &mut self,
        resource_id: impl Into<String>,
        descriptor: Arc<dyn Descriptor>,
    ) -> Result<(), FocusError> {
        let id = resource_id.into();
        if id.is_empty() {
            return Err(FocusError::EmptyResourceId);
        }
        if self.bindings.contains_key(&id) {
            return Err(FocusError::DuplicateBinding(id));
        }
        self.bindings.insert(id, descriptor);
        Ok(())
    }

    pub fn get(&self, resource_id: &str) -> Option<&Arc<dyn Descriptor>> {
        if resource_id.is_empty() {
            return None;
        }
        self.bindings.get(resource_id)
    }

    pub fn resource_ids(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Loads `{"<resource-id>": {"type": ..., "data": ...}, ...}`.
    pub fn from_json(text: &str, settings: &ChartSettings) -> Result<Self, FocusError> {
        let entries: BTreeMap<String, ChartData> = serde_json::from_str(text)?;
        let mut registry = Self::new();
        for (id, data) in entries {
            let descriptor = data.build(settings).map_err(|source| FocusError::Entry {
                id: id.clone(),
                source,
            })?;
            registry.bind(id, descriptor)?;
        }
        Ok(registry)
    }

    /// Bound resource-ids that no node in `root` carries.
    pub fn missing_from(&self, root: &Hierarchy) -> Vec<String> {
        self.bindings
            .keys()
            .filter(|id| !root.walk().any(|(_, n)| &n.resource_id == *id))
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UtteranceSource {
    Descriptor,
    ContentDescription,
    NodeText,
    /// Focusable but silent; the placeholder [`UNLABELED`] is spoken.
    Unlabeled,
}

impl UtteranceSource {
    pub fn tag(self) -> &'static str {
        match self {
            UtteranceSource::Descriptor => "descriptor",
            UtteranceSource::ContentDescription => "content-desc",
            UtteranceSource::NodeText => "text",
            UtteranceSource::Unlabeled => "unlabeled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Utterance {
    pub path: NodePath,
    pub resource_id: String,
    pub spoken_text: String,
    pub source: UtteranceSource,
}

impl Utterance {
    /// Resource-id when the node has one, positional path otherwise.
    pub fn node_ref(&self) -> String {
        if self.resource_id.is_empty() {
            self.path.to_string()
        } else {
            self.resource_id.clone()
        }
    }
}

fn speaks_by_itself(node: &UiNode) -> bool {
    node.has_text() || node.has_content_desc()
}

/// Nodes that take focus, in reading order.
///
/// A focusable container whose descendants already carry text or a content
/// description is skipped so the same content is not read twice. That check
/// ignores registry bindings, so binding a node never silences an ancestor.
pub fn traversal_order<'a>(
    root: &'a Hierarchy,
    registry: &DescriptorRegistry,
) -> Vec<(NodePath, &'a UiNode)> {
    fn visit<'a>(
        path: NodePath,
        node: &'a UiNode,
        registry: &DescriptorRegistry,
        out: &mut Vec<(NodePath, &'a UiNode)>,
    ) -> bool {
        let slot = out.len();
        let mut descendants_speak = false;
        for (i, child) in node.children.iter().enumerate() {
            descendants_speak |= visit(path.child(i), child, registry, out);
        }
        let own = speaks_by_itself(node);
        let focused = registry.get(&node.resource_id).is_some()
            || own
            || (node.focusable && !descendants_speak);
        if focused {
            out.insert(slot, (path, node));
        }
        own || descendants_speak
    }

    let mut out = Vec::new();
    for (i, child) in root.children.iter().enumerate() {
        visit(NodePath(vec![i]), child, registry, &mut out);
    }
    out
}

/// Descriptor, then content description, then text.
pub fn utterance_for(
    path: &NodePath,
    node: &UiNode,
    registry: &DescriptorRegistry,
) -> Result<Utterance, FocusError> {
    let (spoken_text, source) = if let Some(d) = registry.get(&node.resource_id) {
        (d.describe(), UtteranceSource::Descriptor)
    } else if node.has_content_desc() {
        (
            node.content_desc.clone(),
            UtteranceSource::ContentDescription,
        )
    } else if node.has_text() {
        (node.text.clone(), UtteranceSource::NodeText)
    } else if node.focusable {
        (UNLABELED.to_string(), UtteranceSource::Unlabeled)
    } else {
        return Err(FocusError::NotSpeakable(path.clone()));
    };
    if spoken_text.trim().is_empty() {
        return Err(FocusError::NotSpeakable(path.clone()));
    }
    Ok(Utterance {
        path: path.clone(),
        resource_id: node.resource_id.clone(),
        spoken_text,
        source,
    })
}

pub fn simulate(
    root: &Hierarchy,
    registry: &DescriptorRegistry,
) -> Result<Vec<Utterance>, FocusError> {
    traversal_order(root, registry)
        .into_iter()
        .map(|(path, node)| utterance_for(&path, node, registry))
        .collect()
}
