/**
 * Page wiring. Six areas: exercise tree, problem detail, editor, the two
 * action buttons with their verdict popup, and the feedback pane.
 */

import { ApiError, TutorApi, type ExerciseDetail } from "./api.js";
import { CodeEditor } from "./editor.js";
import { clearFeedback, renderFeedback, renderUpstreamBanner } from "./feedback.js";
import { maybeShowGuide } from "./guide.js";
import { clearPopup, showApiError, showLocalNotice, showVerdict } from "./popup.js";
import { Store } from "./state.js";
import { markSelected, renderExerciseTree } from "./tree.js";

export { TutorApi } from "./api.js";

export function startApp(root: HTMLElement, api: TutorApi, storage?: Storage): void {
  root.innerHTML = `
    <header class="topbar"><h1>Code Tutor</h1></header>
    <div id="guide-host"></div>
    <div class="layout">
      <aside id="tree" aria-label="Exercises"></aside>
      <main class="center">
        <section id="detail"><p class="detail-empty">Pick an exercise to get started.</p></section>
        <section id="workspace">
          <div id="editor"></div>
          <div class="actions">
            <button type="button" id="submit">Submit</button>
            <button type="button" id="ask">Ask Code Tutor</button>
          </div>
        </section>
      </main>
      <section id="feedback" aria-live="polite"></section>
    </div>
    <div id="popup" class="popup-host"></div>`;

  const store = new Store();
  const treeEl = root.querySelector<HTMLElement>("#tree")!;
  const detailEl = root.querySelector<HTMLElement>("#detail")!;
  const feedbackEl = root.querySelector<HTMLElement>("#feedback")!;
  const popupEl = root.querySelector<HTMLElement>("#popup")!;
  const submitBtn = root.querySelector<HTMLButtonElement>("#submit")!;
  const askBtn = root.querySelector<HTMLButtonElement>("#ask")!;
  const editor = new CodeEditor(root.querySelector<HTMLElement>("#editor")!);

  maybeShowGuide(root.querySelector<HTMLElement>("#guide-host")!, storage);

  editor.onChange = () => store.set({ source: editor.getValue() });

  store.subscribe((state) => {
    const busy = state.busy !== "idle";
    submitBtn.disabled = busy;
    askBtn.disabled = busy;
    submitBtn.textContent = state.busy === "submitting" ? "Checking…" : "Submit";
    askBtn.textContent = state.busy === "reviewing" ? "Asking…" : "Ask Code Tutor";
  });

  const closePopup = () => store.set({ verdictPopup: null });

  function resetResults(): void {
    editor.clearDecorations();
    clearFeedback(feedbackEl);
    clearPopup(popupEl);
    store.set({ feedback: null, verdictPopup: null });
  }

  async function selectExercise(id: string): Promise<void> {
    resetResults();
    try {
      const detail = await api.getExercise(id);
      store.set({ selectedExercise: id });
      markSelected(treeEl, id);
      renderDetail(detailEl, detail);
    } catch (err) {
      if (err instanceof ApiError && err.code === "NotFound") {
        detailEl.innerHTML = `<p class="detail-error">That exercise is gone: ${err.message}</p>`;
        return;
      }
      throw err;
    }
  }

  function guardReady(): string | null {
    const state = store.get();
    if (!state.selectedExercise) {
      showLocalNotice(popupEl, "Pick an exercise first.", closePopup);
      return null;
    }
    if (!editor.getValue().trim()) {
      // server would refuse with EmptyCode anyway; skip the round trip
      showLocalNotice(popupEl, "Write some code before asking.", closePopup);
      return null;
    }
    return state.selectedExercise;
  }

  function applyFindings(error: ApiError): void {
    editor.setDecorations(
      error.findings().map((f) => ({ line: f.line, hint: f.message, kind: "CodeToFix" as const })),
    );
  }

  async function submitCode(): Promise<void> {
    const exerciseId = guardReady();
    if (exerciseId === null || !store.begin("submitting")) {
      return;
    }
    try {
      const verdict = await api.submit(exerciseId, editor.getValue());
      store.set({ verdictPopup: verdict });
      showVerdict(popupEl, verdict, closePopup);
    } catch (err) {
      if (!(err instanceof ApiError)) {
        throw err;
      }
      store.set({ verdictPopup: err });
      showApiError(popupEl, err, closePopup);
      applyFindings(err);
    } finally {
      store.end();
    }
  }

  async function askTutor(): Promise<void> {
    const exerciseId = guardReady();
    if (exerciseId === null || !store.begin("reviewing")) {
      return;
    }
    try {
      const review = await api.review(exerciseId, editor.getValue());
      store.set({ feedback: review });
      const decorations = renderFeedback(feedbackEl, review);
      editor.setDecorations(decorations);
    } catch (err) {
      if (!(err instanceof ApiError)) {
        throw err;
      }
      if (err.code === "Upstream") {
        renderUpstreamBanner(feedbackEl, err.message, () => void askTutor());
      } else {
        store.set({ verdictPopup: err });
        showApiError(popupEl, err, closePopup);
        applyFindings(err);
      }
    } finally {
      store.end();
    }
  }

  submitBtn.addEventListener("click", () => void submitCode());
  askBtn.addEventListener("click", () => void askTutor());

  api
    .getExercises()
    .then((tree) => renderExerciseTree(treeEl, tree, (id) => void selectExercise(id)))
    .catch(() => {
      treeEl.innerHTML = '<p class="tree-empty">Could not load exercises — is the service up?</p>';
    });
}

function renderDetail(host: HTMLElement, detail: ExerciseDetail): void {
  host.innerHTML = "";
  const title = document.createElement("h2");
  title.textContent = detail.title;
  host.appendChild(title);

  const crumb = document.createElement("p");
  crumb.className = "detail-crumb";
  crumb.textContent = detail.category_path.join(" › ");
  host.appendChild(crumb);

  const req = document.createElement("section");
  req.className = "detail-req";
  req.innerHTML = "<h3>Problem</h3>";
  const desc = document.createElement("p");
  desc.textContent = detail.description;
  req.appendChild(desc);
  host.appendChild(req);

  const io = document.createElement("section");
  io.className = "detail-io";
  io.appendChild(ioColumn("Input examples", "detail-input", detail.input_examples));
  io.appendChild(ioColumn("Output examples", "detail-output", detail.output_examples));
  host.appendChild(io);
}

function ioColumn(label: string, className: string, examples: string[]): HTMLElement {
  const column = document.createElement("div");
  column.className = className;
  const heading = document.createElement("h3");
  heading.textContent = label;
  column.appendChild(heading);
  if (!examples.length) {
    const none = document.createElement("p");
    none.textContent = "(none)";
    column.appendChild(none);
  }
  for (const example of examples) {
    const pre = document.createElement("pre");
    pre.textContent = example;
    column.appendChild(pre);
  }
  return column;
}
