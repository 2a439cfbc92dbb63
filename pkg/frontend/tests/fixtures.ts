// Real response bodies captured from the service running the committed
// soccer demo project; the mocked API in these tests replays them.

export const GOLDEN_DOCUMENT =
  '{"v":1,"project":"soccer-demo","fps":"25/1","domain_ontology":{"prefix":"soccer","version":"1.0"},"time_ontology":{"prefix":"soccertime","version":"1.0"},"rules_sha256":"2bf3438e478f2906abfa8af4b130f0e82d6d3c8b768532d0643b94924b7b1f01","detector":{"threshold":0.5,"min_shot_frames":5}}\n' +
  '{"id":"ec3385e638ac7827","concept":"soccer:Transition","start_ms":0,"end_ms":6000,"attributes":{},"provenance":[{"rule":"transition","events":["e0000","e0001"]}]}\n' +
  '{"id":"822fb142c82406a4","concept":"soccer:GoalScene","start_ms":3000,"end_ms":6000,"attributes":{"goal_confidence":0.9},"provenance":[{"rule":"goal_scene","events":["e0001","e0002"]}]}\n' +
  '{"id":"b12b11712ffa7977","concept":"soccer:Transition","start_ms":3000,"end_ms":9000,"attributes":{},"provenance":[{"rule":"transition","events":["e0001","e0003"]}]}\n' +
  '{"id":"1d696938b6b7a49c","concept":"soccer:Goal","start_ms":3500,"end_ms":4200,"attributes":{"source_track":1},"provenance":[{"rule":"goal","events":["e0002"]}]}\n';

export const GOLDEN_TIMELINE = {
  v: 1,
  fps: "25/1",
  events: [
    { id: "e0000", type: "shot", start_ms: 0, end_ms: 3000, confidence: 1.0, attributes: { index: 0, stream: 0 } },
    { id: "e0001", type: "shot", start_ms: 3000, end_ms: 6000, confidence: 1.0, attributes: { index: 1, stream: 0 } },
    { id: "e0002", type: "ocr_text", start_ms: 3500, end_ms: 4200, confidence: 0.9, attributes: { text: "GOAL", track_id: 1 } },
    { id: "e0003", type: "shot", start_ms: 6000, end_ms: 9000, confidence: 1.0, attributes: { index: 2, stream: 0 } },
    { id: "e0004", type: "ocr_text", start_ms: 8200, end_ms: 8900, confidence: 0.8, attributes: { text: "CORNER", track_id: 2 } },
  ],
};

export const TYPO_RULE =
  'rule "r" { when shot s whre 1 > 0 annotate soccer:Goal(interval = s) }';

// The service's 422 body for TYPO_RULE, verbatim.
export const TYPO_DIAGNOSTICS = {
  diagnostics: [
    {
      file: "rules.rules",
      line: 1,
      col: 24,
      code: "syntax_error",
      severity: "error",
      message: "expected 'where', found 'whre'",
      end_line: 1,
      end_col: 28,
    },
  ],
};

export const CLEAN_RULE =
  'rule "goal" { when ocr_text t where t.text == "GOAL" annotate soccer:Goal(interval = t) }';
