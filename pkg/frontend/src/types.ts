// Payload shapes of the arena REST API.

export type AnswerSentence = {
  text: string;
  citations: number[]; // zero-based indices into references
};

export type RagResponse = {
  run_id: string;
  topic_id: string;
  references: string[];
  answer: AnswerSentence[];
  response_length: number;
};

export type BattleSide = {
  side: "left" | "right";
  response: RagResponse | null;
  error: string | null;
};

export type BattlePayload = {
  battle_id: string;
  topic: string;
  state: "created" | "running" | "answered" | "voted" | "error";
  blinded: boolean;
  sides: { A: BattleSide; B: BattleSide };
  vote?: { choice: string; voter: string; timestamp: number };
  pipelines?: { A: string; B: string }; // present when unblinded or after the vote
};

export type SegmentPreview = {
  segment_id: string;
  url: string;
  title: string;
  headings: string;
  text: string;
  start_char: number;
  end_char: number;
};

export type LeaderboardEntry = {
  pipeline_id: string;
  wins: number;
  losses: number;
  ties: number;
  both_bad: number;
  rating: number;
};

export type PipelineInfo = {
  id: string;
  retriever: Record<string, unknown>;
  reranker: Record<string, unknown>;
  generator: Record<string, unknown>;
};

export type VoteChoice = "left" | "right" | "tie" | "both_bad";
