// Copy text to the clipboard, exactly as given. When the clipboard API
// is unavailable or denied, the caller gets "fallback" and should show
// the text in a select-all textarea instead.

export type CopyResult = "copied" | "fallback";

export async function copyText(text: string): Promise<CopyResult> {
  const clipboard = typeof navigator !== "undefined" ? navigator.clipboard : undefined;
  if (clipboard && typeof clipboard.writeText === "function") {
    try {
      await clipboard.writeText(text);
      return "copied";
    } catch {
      return "fallback";
    }
  }
  return "fallback";
}

export function showFallbackArea(host: HTMLElement, text: string): HTMLTextAreaElement {
  let area = host.querySelector<HTMLTextAreaElement>("textarea.copy-fallback");
  if (!area) {
    area = document.createElement("textarea");
    area.className = "copy-fallback";
    area.readOnly = true;
    area.rows = 8;
    area.setAttribute("aria-label", "BibTeX to copy manually");
    host.appendChild(area);
  }
  area.value = text;
  area.focus();
  area.select();
  area.setSelectionRange(0, text.length);
  return area;
}
