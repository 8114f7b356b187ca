import { describe, expect, it } from "vitest";

import { renderMarkdown } from "../src/markdown";

describe("renderMarkdown", () => {
  it("renders headings as elements, not raw text", () => {
    const html = renderMarkdown("### Example\nsome text");
    expect(html).toContain("<h5>Example</h5>");
    expect(html).not.toContain("###");
  });

  it("renders bullet lists", () => {
    const html = renderMarkdown("- first\n- second");
    expect(html).toBe("<ul><li>first</li><li>second</li></ul>");
  });

  it("renders fenced code without inline formatting", () => {
    const html = renderMarkdown("```python\nx = 1 * 2\n**not bold**\n```");
    expect(html).toContain("<pre><code>x = 1 * 2\n**not bold**</code></pre>");
  });

  it("closes an unterminated fence at the end", () => {
    expect(renderMarkdown("```\nx = 1")).toBe("<pre><code>x = 1</code></pre>");
  });

  it("renders inline code, bold, and italics", () => {
    const html = renderMarkdown("fix `range(n)` — it is **off** by *one*");
    expect(html).toContain("<code>range(n)</code>");
    expect(html).toContain("<strong>off</strong>");
    expect(html).toContain("<em>one</em>");
  });

  it("joins wrapped lines into one paragraph and splits on blank lines", () => {
    const html = renderMarkdown("first line\nsame paragraph\n\nsecond paragraph");
    expect(html).toBe("<p>first line same paragraph</p>\n<p>second paragraph</p>");
  });

  it("escapes HTML before adding markup", () => {
    const html = renderMarkdown('<script>alert("x")</script>');
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("keeps markdown inside code fences escaped too", () => {
    const html = renderMarkdown("```\n<b>raw</b>\n```");
    expect(html).toContain("&lt;b&gt;raw&lt;/b&gt;");
  });
});
