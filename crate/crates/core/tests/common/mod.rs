#![allow(dead_code)]

pub mod dot_check;
pub mod oracle;

use std::sync::Arc;

use grammod::io::{parse_rule_gml, parse_smiles};
use grammod::{Graph, Rule};

pub const KETO_ENOL_CHARGED: &str = r#"rule [
   left [
      edge [ source 1 target 4 label "-" ]
      edge [ source 1 target 2 label "-" ]
      edge [ source 2 target 3 label "=" ]
      node [ id 3 label "O" ]
      node [ id 4 label "H" ]
   ]
   context [
      node [ id 1 label "C" ]
      node [ id 2 label "C" ]
   ]
   right [
      edge [ source 1 target 2 label "=" ]
      edge [ source 2 target 3 label "-" ]
      node [ id 3 label "O-" ]
      node [ id 4 label "H+" ]
   ]
]"#;

pub const KETO_ENOL: &str = r#"rule [   ruleID "Keto-enol isomerization"
	left [      edge [ source 1 target 4 label "-" ]   edge [ source 1 target 2 label "-" ]
	            edge [ source 2 target 3 label "=" ]                                      ]
	context [   node [ id 1 label "C" ]   node [ id 2 label "C" ]
	            node [ id 3 label "O" ]   node [ id 4 label "H" ]                         ]
	right [     edge [ source 1 target 2 label "=" ]   edge [ source 2 target 3 label "-" ]
	            edge [ source 3 target 4 label "-" ]                                      ]
]"#;

pub const ALDOL_ADD: &str = r#"rule [   ruleID "Aldol Addition"
	left [      edge [ source 1 target 2 label "=" ]   edge [ source 2 target 3 label "-" ]
	            edge [ source 3 target 4 label "-" ]   edge [ source 5 target 6 label "=" ]   ]
	context [   node [ id 1 label "C" ]   node [ id 2 label "C" ]   node [ id 3 label "O" ]
	            node [ id 4 label "H" ]   node [ id 5 label "O" ]   node [ id 6 label "C" ]   ]
	right [     edge [ source 1 target 2 label "-" ]   edge [ source 2 target 3 label "=" ]
	            edge [ source 5 target 6 label "-" ]
	            edge [ source 4 target 5 label "-" ]   edge [ source 6 target 1 label "-" ]   ]
]"#;

pub const DESTROY_VERTEX: &str = r#"rule [   left    [   node [ id 1 label "A" ]   ]   ]"#;
pub const CREATE_VERTEX: &str = r#"rule [   right   [   node [ id 1 label "A" ]   ]   ]"#;
pub const IDENTITY: &str = r#"rule [   context [   node [ id 1 label "A" ]   ]   ]"#;
pub const ADD_EDGE: &str = r#"rule [
	context [ node [ id 1 label "A" ] node [ id 2 label "A" ] ]
	right   [ edge [ source 1 target 2 label "-" ] ]
]"#;

pub fn rule(gml: &str, invert: bool, name: &str) -> Arc<Rule> {
    Arc::new(parse_rule_gml(gml, invert).unwrap().with_name(name))
}

pub fn smiles(s: &str, name: &str) -> Arc<Graph> {
    Arc::new(parse_smiles(s).unwrap().with_name(name))
}

pub struct Formose {
    pub formaldehyde: Arc<Graph>,
    pub glycolaldehyde: Arc<Graph>,
    pub keto_enol_f: Arc<Rule>,
    pub keto_enol_b: Arc<Rule>,
    pub aldol_add_f: Arc<Rule>,
    pub aldol_add_b: Arc<Rule>,
}

impl Formose {
    pub fn new() -> Formose {
        Formose {
            formaldehyde: smiles("C=O", "formaldehyde"),
            glycolaldehyde: smiles("OCC=O", "glycolaldehyde"),
            keto_enol_f: rule(KETO_ENOL, false, "ketoEnol_F"),
            keto_enol_b: rule(KETO_ENOL, true, "ketoEnol_B"),
            aldol_add_f: rule(ALDOL_ADD, false, "aldolAdd_F"),
            aldol_add_b: rule(ALDOL_ADD, true, "aldolAdd_B"),
        }
    }

    pub fn graphs(&self) -> Vec<Arc<Graph>> {
        vec![self.formaldehyde.clone(), self.glycolaldehyde.clone()]
    }

    pub fn rules(&self) -> Vec<Arc<Rule>> {
        vec![
            self.keto_enol_f.clone(),
            self.keto_enol_b.clone(),
            self.aldol_add_f.clone(),
            self.aldol_add_b.clone(),
        ]
    }
}

pub const RC4: &str = "(   rcId(glycolaldehyde) *rcSuper* ketoEnol_F
          *rcParallel* rcId(formaldehyde)
          *rcSuper(allowPartial=False)* aldolAdd_F
          *rcSuper* ketoEnol_F
          *rcParallel* rcId(formaldehyde)
          *rcSuper(allowPartial=False)* aldolAdd_F
          *rcSuper* ketoEnol_F
          *rcSuper* ketoEnol_B
          *rcSuper* aldolAdd_B
          *rcSuper* ketoEnol_B
          *rcSuper(allowPartial=False)*
          (rcId(glycolaldehyde) *rcParallel* rcId(glycolaldehyde))   )";
