/**
 * Response payloads for tests, captured verbatim from the REST service
 * running against its scripted (mock) gateway — same shapes a browser sees.
 */

import type { CategoryNode, ExerciseDetail, Review, Verdict } from "../src/api";

export const TREE: CategoryNode[] = [
  {
    name: "basics",
    children: [
      { name: "output", children: [], exercises: [{ id: "hello-name", title: "Greet by name" }] },
      { name: "conditionals", children: [], exercises: [{ id: "even-odd", title: "Even or odd" }] },
    ],
    exercises: [],
  },
  {
    name: "loops",
    children: [],
    exercises: [
      { id: "sum-to-n", title: "Sum 1 to n" },
      { id: "times-table", title: "Multiplication table" },
    ],
  },
  { name: "strings", children: [], exercises: [{ id: "reverse-string", title: "Reverse a string" }] },
];

export const DETAIL_SUM: ExerciseDetail = {
  id: "sum-to-n",
  title: "Sum 1 to n",
  description: "Read a positive integer n and print the sum of the integers from 1 to n.",
  input_examples: ["3", "10"],
  output_examples: ["6", "55"],
  category_path: ["loops"],
};

export const DETAIL_EVEN_ODD: ExerciseDetail = {
  id: "even-odd",
  title: "Even or odd",
  description: "Read an integer and print 'even' or 'odd'.",
  input_examples: ["4", "7"],
  output_examples: ["even", "odd"],
  category_path: ["basics", "conditionals"],
};

export const INVALID_CODE_ERROR = {
  status: 400,
  body: {
    code: "InvalidCode",
    message: "line 1: 'if' statement has no ':'",
    details: {
      verdict: "Invalid",
      findings: [{ kind: "MissingColon", line: 1, message: "'if' statement has no ':'" }],
    },
  },
};

export const EMPTY_CODE_ERROR = {
  status: 400,
  body: { code: "EmptyCode", message: "the submitted source is empty" },
};

export const UPSTREAM_ERROR = {
  status: 502,
  body: { code: "Upstream", message: "Timeout: the model did not answer" },
};

const USAGE = { input_tokens: 287, output_tokens: 17, latency_ms: 0.0, call_count: 1 };

export const VERDICT_CORRECT: Verdict = {
  state: "correct",
  reason: "matches every example",
  error_type: null,
  usage: USAGE,
};

export const VERDICT_WRONG: Verdict = {
  state: "wrong",
  reason: "prints a constant instead of summing",
  error_type: "HardCoding",
  usage: USAGE,
};

export const VERDICT_ERROR: Verdict = {
  state: "error",
  reason: "could not run the submission",
  error_type: null,
  usage: USAGE,
};

export const REVIEW: Review = {
  review_needed: true,
  body_markdown:
    "yes — close, two details left.\n\nYour loop stops one short of `n`, and the total starts from the wrong value.\n\n### Example\nFor n = 3 the expected output is 6.",
  fix_lines: [
    { line: 2, hint: "the range needs to include n" },
    { line: 1, hint: "start the total at 0" },
  ],
  redaction: { leaked: false, redactions: 0 },
  dropped_fix_lines: 0,
  usage: { input_tokens: 464, output_tokens: 63, latency_ms: 0.0, call_count: 2 },
};

export const LOOKS_GOOD: Review = {
  review_needed: false,
  body_markdown: "Looks good! Your code passed review with no comments.",
  fix_lines: [],
  redaction: { leaked: false, redactions: 0 },
  dropped_fix_lines: 0,
  usage: { input_tokens: 103, output_tokens: 1, latency_ms: 0.0, call_count: 1 },
};

type Scripted = { status: number; body: unknown };

export interface FetchScript {
  submissions: Scripted[];
  reviews: Scripted[];
  details: Record<string, ExerciseDetail>;
  tree: CategoryNode[];
  log: Array<{ method: string; url: string; body: unknown }>;
}

export function makeScript(overrides: Partial<FetchScript> = {}): FetchScript {
  return {
    submissions: [],
    reviews: [],
    details: { "sum-to-n": DETAIL_SUM, "even-odd": DETAIL_EVEN_ODD },
    tree: TREE,
    log: [],
    ...overrides,
  };
}

/** fetch() replacement that plays the scripted service. */
export function scriptedFetch(script: FetchScript): typeof fetch {
  const respond = (status: number, body: unknown): Response =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  return async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    script.log.push({ method, url, body });

    if (method === "GET" && url.endsWith("/exercises")) {
      return respond(200, { tree: script.tree });
    }
    const detailMatch = url.match(/\/exercises\/([^/]+)$/);
    if (method === "GET" && detailMatch) {
      const detail = script.details[decodeURIComponent(detailMatch[1]!)];
      return detail
        ? respond(200, detail)
        : respond(404, { code: "NotFound", message: `no exercise with id '${detailMatch[1]}'` });
    }
    if (method === "POST" && url.endsWith("/submissions")) {
      const next = script.submissions.shift();
      if (!next) throw new Error("unscripted POST /submissions");
      return respond(next.status, next.body);
    }
    if (method === "POST" && url.endsWith("/reviews")) {
      const next = script.reviews.shift();
      if (!next) throw new Error("unscripted POST /reviews");
      return respond(next.status, next.body);
    }
    throw new Error(`unscripted request: ${method} ${url}`);
  };
}
