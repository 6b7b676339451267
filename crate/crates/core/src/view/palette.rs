//! Operations each view category offers.

use serde::{Deserialize, Serialize};

use super::ViewCategory;
use crate::mutation::MutationKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ArgType {
    Identifier,
    ElementRef,
    Text,
    /// A boolean switch, used for port conjugation.
    Flag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: ArgType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PaletteItem {
    pub operation_kind: MutationKind,
    pub label: String,
    pub argument_schema: Vec<ArgSpec>,
}

fn item(kind: MutationKind, label: &str, args: &[(&str, ArgType)]) -> PaletteItem {
    PaletteItem {
        operation_kind: kind,
        label: label.to_owned(),
        argument_schema: args.iter().map(|(n, t)| ArgSpec { name: (*n).to_owned(), ty: *t }).collect(),
    }
}

pub fn palette_for(category: ViewCategory) -> Vec<PaletteItem> {
    use ArgType::*;
    use MutationKind as K;
    let rename = item(K::Rename, "Rename", &[("target", ElementRef), ("name", Identifier)]);
    let delete = item(K::Delete, "Delete", &[("target", ElementRef)]);
    let named = [("container", ElementRef), ("name", Identifier)];
    match category {
        ViewCategory::Root => vec![
            item(K::AddProtocol, "Protocol", &named),
            item(K::AddCapsule, "Capsule", &named),
            rename,
            delete,
        ],
        ViewCategory::Structure => vec![
            item(K::AddPort, "Port", &[("container", ElementRef), ("name", Identifier), ("protocol", ElementRef), ("conjugated", Flag)]),
            item(K::AddPart, "Part", &[("container", ElementRef), ("name", Identifier), ("capsule", ElementRef)]),
            item(K::AddConnector, "Connector", &[("container", ElementRef), ("endA", Text), ("endB", Text)]),
            rename,
            delete,
        ],
        ViewCategory::Behavior => vec![
            item(K::AddState, "State", &named),
            item(K::AddCompositeState, "Composite state", &named),
            item(K::AddTransition, "Transition", &[("container", ElementRef), ("source", ElementRef), ("target", ElementRef)]),
            item(K::SetInitial, "Initial state", &[("container", ElementRef), ("target", ElementRef)]),
            item(K::SetTransitionTrigger, "Trigger", &[("target", ElementRef), ("trigger", Text)]),
            item(K::SetTransitionGuard, "Guard", &[("target", ElementRef), ("guard", Text)]),
            item(K::SetTransitionAction, "Action", &[("target", ElementRef), ("action", Text)]),
            rename,
            delete,
        ],
        ViewCategory::Analysis => Vec::new(),
    }
}
