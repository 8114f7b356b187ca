/**
 * Plain-textarea code editor with a line-number gutter, light Python
 * highlighting, and per-line decorations ("Code to fix" markers with hover
 * hints). The highlight layer is a <pre> kept in sync behind a transparent
 * textarea.
 */

export interface EditorDecoration {
  line: number; // 1-based
  hint: string;
  kind: "CodeToFix";
}

// one alternation, scanned left to right: comments win over strings win
// over keywords/numbers, and tokens never overlap
const TOKEN =
  /(#.*)|("[^"]*"?|'[^']*'?)|\b(def|return|if|elif|else|for|while|in|not|and|or|print|input|int|str|float|len|range|import|from|pass|break|continue|True|False|None)\b|(\d+)/g;

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function highlightLine(line: string): string {
  let html = "";
  let last = 0;
  for (const match of line.matchAll(TOKEN)) {
    const [whole, comment, str, keyword] = match;
    html += escapeHtml(line.slice(last, match.index));
    const cls = comment ? "tok-comment" : str ? "tok-str" : keyword ? "tok-kw" : "tok-num";
    html += `<span class="${cls}">${escapeHtml(whole)}</span>`;
    last = match.index + whole.length;
  }
  return html + escapeHtml(line.slice(last));
}

export class CodeEditor {
  private textarea: HTMLTextAreaElement;
  private gutter: HTMLElement;
  private highlight: HTMLElement;
  private active: EditorDecoration[] = [];
  onChange: (() => void) | null = null;

  constructor(container: HTMLElement) {
    container.classList.add("editor");
    container.innerHTML = `
      <div class="editor-gutter" aria-hidden="true"></div>
      <div class="editor-body">
        <pre class="editor-highlight" aria-hidden="true"></pre>
        <textarea class="editor-input" spellcheck="false"
                  aria-label="Python code editor" rows="14"></textarea>
      </div>`;
    this.gutter = container.querySelector(".editor-gutter")!;
    this.highlight = container.querySelector(".editor-highlight")!;
    this.textarea = container.querySelector(".editor-input")!;
    this.textarea.addEventListener("input", () => {
      // editing invalidates whatever the last review pointed at
      this.active = [];
      this.refresh();
      this.onChange?.();
    });
    this.textarea.addEventListener("scroll", () => {
      this.highlight.scrollTop = this.textarea.scrollTop;
      this.highlight.scrollLeft = this.textarea.scrollLeft;
      this.gutter.scrollTop = this.textarea.scrollTop;
    });
    this.refresh();
  }

  getValue(): string {
    return this.textarea.value;
  }

  setValue(source: string): void {
    this.textarea.value = source;
    this.active = [];
    this.refresh();
  }

  lineCount(): number {
    return this.textarea.value.split("\n").length;
  }

  decorations(): readonly EditorDecoration[] {
    return this.active;
  }

  /** Lines outside the current document are ignored, not clamped. */
  setDecorations(decorations: EditorDecoration[]): void {
    const count = this.lineCount();
    this.active = decorations.filter((d) => d.line >= 1 && d.line <= count);
    this.refresh();
  }

  clearDecorations(): void {
    this.active = [];
    this.refresh();
  }

  focus(): void {
    this.textarea.focus();
  }

  private refresh(): void {
    const lines = this.textarea.value.split("\n");
    const byLine = new Map(this.active.map((d) => [d.line, d]));
    this.gutter.innerHTML = lines
      .map((_, i) => {
        const deco = byLine.get(i + 1);
        if (deco) {
          const hint = escapeHtml(deco.hint);
          return `<div class="line-no marked" data-line="${i + 1}" title="Code to fix: ${hint}">${i + 1}<span class="marker">●</span></div>`;
        }
        return `<div class="line-no" data-line="${i + 1}">${i + 1}</div>`;
      })
      .join("");
    this.highlight.innerHTML = lines
      .map((line, i) => {
        const deco = byLine.get(i + 1);
        const cls = deco ? ' class="line fix-line"' : ' class="line"';
        const hint = deco ? ` title="Code to fix: ${escapeHtml(deco.hint)}"` : "";
        return `<span${cls}${hint}>${highlightLine(line) || "&nbsp;"}</span>`;
      })
      .join("\n");
  }
}
